#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cosred/fixtures.hpp"
#include "cosred/phase_numeric.hpp"
#include "cosred/serialize.hpp"
#include "cosred/strat_engine.hpp"

namespace cosred {

struct VerifyOptions {
  std::uint64_t seed = 0;
  int count = 10000;
  /// Empty means generic sampling over all planes. Several patterns are
  /// cycled through sample by sample.
  std::vector<SupportPattern> patterns;
  Tolerances tol;
  double min_principal_fraction = 0.99;
  bool keep_rows = false;
};

struct VerificationReport {
  std::string fixture;
  std::uint64_t seed = 0;
  int count = 0;
  std::map<std::string, int> counts;  // per C-L stratum (with branch suffix when split)
  int no_match = 0;
  int piece_mismatch = 0;  // semialgebraic stratum differs from the support-based piece
  int unstarred = 0;       // orbit type outside I*_Q
  double max_momentum = 0;
  double max_cosphere = 0;  // |Σ_j (p1 + p3) − 2|
  double max_cone = 0;      // relative |p1² − p2² − p3² − 4 p4²|
  double max_membership = 0;
  double principal_fraction = 0;
  bool check_principal = true;
  std::string principal_piece;
  std::vector<SampleRow> rows;
  std::vector<std::string> failures;

  bool pass() const { return failures.empty(); }
};

inline double cone_residual(const PlaneInvariants& pl) {
  const double lhs = pl.p1 * pl.p1;
  return std::abs(lhs - pl.p2 * pl.p2 - pl.p3 * pl.p3 - 4 * pl.p4 * pl.p4) / std::max(1.0, lhs);
}

/// All support patterns (x planes, nonempty u planes).
inline std::vector<SupportPattern> all_support_patterns(int n) {
  std::vector<SupportPattern> out;
  const SupportMask count = SupportMask{1} << n;
  for (SupportMask xm = 0; xm < count; ++xm)
    for (SupportMask um = 1; um < count; ++um) out.push_back({planes_of(xm, n), planes_of(um, n)});
  return out;
}

inline VerificationReport verify_fixture(const Fixture& fixture, const VerifyOptions& options) {
  if (options.count < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be at least 1");
  VerificationReport report;
  report.fixture = fixture.name;
  report.seed = options.seed;
  report.count = options.count;
  report.check_principal = options.patterns.empty();

  const auto model = build_torus_model(fixture.spec);
  const auto starred_list = starred_lattice(model.poset);
  const std::set<std::string> starred(starred_list.begin(), starred_list.end());
  report.principal_piece = StratumName::cc(principal_type(model.poset).label).str();

  int principal_hits = 0;
  for (int i = 0; i < options.count; ++i) {
    const SupportPattern pattern =
        options.patterns.empty() ? SupportPattern{} : options.patterns[i % options.patterns.size()];
    const auto p = sample_zero_level_point(fixture.spec, options.seed, static_cast<std::uint64_t>(i), pattern);
    const auto j = momentum(fixture.spec, p);
    const auto inv = invariants(p);

    report.max_momentum = std::max(report.max_momentum, norm(j));
    double mass = 0;
    for (const auto& pl : inv) {
      mass += pl.p1 + pl.p3;
      report.max_cone = std::max(report.max_cone, cone_residual(pl));
    }
    report.max_cosphere = std::max(report.max_cosphere, std::abs(mass - 2.0));
    if (!starred.count(classify_point(model, p, options.tol.support))) ++report.unstarred;

    const auto piece = classify_piece(model, p, options.tol.support).str();
    std::string label = "NoMatch";
    double residual = 0;
    try {
      const auto image = hilbert_map(fixture.spec, p, options.tol.constraint);
      const auto m = check_reduced_membership(fixture.description, image, options.tol.band);
      residual = m.residual;
      report.max_membership = std::max(report.max_membership, m.residual);
      label = m.stratum;
      if (m.stratum != piece) ++report.piece_mismatch;
      ++report.counts[m.branch.empty() ? m.stratum : m.stratum + "/" + m.branch];
      if (m.stratum == report.principal_piece) ++principal_hits;
    } catch (const Error&) {
      ++report.no_match;
    }
    if (options.keep_rows) report.rows.push_back({p, j, inv, label, residual});
  }
  report.principal_fraction = static_cast<double>(principal_hits) / options.count;

  auto fail_if = [&](bool bad, std::string what) {
    if (bad) report.failures.push_back(std::move(what));
  };
  fail_if(report.max_momentum >= options.tol.constraint, "momentum exceeds tolerance");
  fail_if(report.max_cosphere >= options.tol.identity, "cosphere constraint exceeds tolerance");
  fail_if(report.max_cone >= options.tol.identity, "cone relation exceeds tolerance");
  fail_if(report.unstarred > 0, "samples outside the starred lattice");
  fail_if(report.no_match > 0, "samples with no matching stratum");
  fail_if(report.max_membership >= options.tol.band, "membership residual exceeds tolerance");
  fail_if(report.piece_mismatch > 0, "semialgebraic and support-based pieces disagree");
  fail_if(report.check_principal && report.principal_fraction < options.min_principal_fraction,
          "principal cosphere-like piece below expected frequency");
  return report;
}

inline json report_to_json(const VerificationReport& r) {
  json j = {{"fixture", r.fixture},
            {"seed", r.seed},
            {"count", r.count},
            {"counts", r.counts},
            {"no_match", r.no_match},
            {"piece_mismatch", r.piece_mismatch},
            {"unstarred", r.unstarred},
            {"max_residuals",
             {{"momentum", r.max_momentum},
              {"cosphere", r.max_cosphere},
              {"cone", r.max_cone},
              {"membership", r.max_membership}}},
            {"principal_piece", r.principal_piece},
            {"principal_fraction", r.principal_fraction},
            {"pass", r.pass()},
            {"failures", r.failures}};
  return j;
}

}  // namespace cosred
