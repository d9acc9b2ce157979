// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cosred/commands.hpp"
#include "oracles.hpp"

using namespace cosred;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void run(int id, const std::string& title, double budget_s, const std::function<std::string()>& body) {
  const auto start = Clock::now();
  std::string problem;
  try {
    problem = body();
  } catch (const std::exception& e) {
    problem = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (problem.empty() && budget_s > 0 && secs >= budget_s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "runtime %.3f s over budget %.0f s", secs, budget_s);
    problem = buf;
  }
  std::printf("%s criterion %d: %s (%.3f s)%s%s\n", problem.empty() ? "PASS" : "FAIL", id, title.c_str(), secs,
              problem.empty() ? "" : " -- ", problem.c_str());
  if (!problem.empty()) ++failures;
}

std::vector<double> image_of(const PhasePoint& p) {
  std::vector<double> out;
  for (const auto& pl : invariants(p)) out.insert(out.end(), {pl.p1, pl.p2, pl.p3});
  return out;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Structural identities for one poset; returns the first violation.
std::string poset_properties(const IsotropyPoset& p) {
  const auto r = cl_stratification(p);
  auto q = [&](const std::string& l) { return p.dim_Q_of.at(l) - p.dim_G + p.type(l).dim_H; };
  std::set<std::string> starred;
  for (const auto& t : p.types)
    if (q(t.label) >= 1) starred.insert(t.label);

  std::size_t pairs = 0;
  for (const auto& [l, h] : p.order) pairs += starred.count(l);
  if (r.cl_strata.size() != starred.size() + pairs) return "piece count";

  for (const auto& s : r.cl_strata) {
    const int contact = 2 * q(s.name.lower) - 1;
    if (s.name.piece == Piece::CC) {
      if (s.dim != contact) return "CC dimension for " + s.id();
      // The seam formula at H = L reproduces the CC dimension.
      if (q(s.name.lower) + q(s.name.lower) - 1 != s.dim) return "degenerate seam formula";
      continue;
    }
    if (s.dim < 0) return "negative seam dimension " + s.id();
    const int excess = s.dim - (contact - 1) / 2;
    if (excess != q(s.name.upper)) return "coisotropy excess for " + s.id();
    const bool legendrian = s.kind == StratumKind::LegendrianSeam;
    if ((excess == 0) != legendrian || legendrian != !starred.count(s.name.upper))
      return "Legendrian classification for " + s.id();
  }
  if (r.hasse != oracle::reduction(r.frontier)) return "Hasse reduction differs from brute force";
  if (transitive_closure(r.hasse) != r.frontier) return "Hasse round trip";
  if (hasse_edges(r.hasse) != r.hasse) return "Hasse not idempotent";
  return {};
}

}  // namespace

int main() {
  run(1, "t2-on-r4 stratification inventory", 1.0, [] {
    cli::RunConfig config;
    config.fixture = "t2-on-r4";
    std::ostringstream out;
    if (cli::cmd_reduce(config, out) != cli::kPass) return std::string("reduce exit code");
    const auto j = json::parse(out.str()).at("result");
    std::multiset<int> contact, cl;
    std::map<std::string, int> kinds;
    for (const auto& s : j.at("contact_strata")) contact.insert(s.at("dim").get<int>());
    for (const auto& s : j.at("cl_strata")) {
      cl.insert(s.at("dim").get<int>());
      ++kinds[s.at("kind").get<std::string>()];
    }
    if (contact != std::multiset<int>{3, 1, 1}) return std::string("contact dims");
    if (cl != std::multiset<int>{3, 2, 2, 1, 1, 1, 0, 0}) return std::string("C-L dims");
    if (kinds != std::map<std::string, int>{{"cosphere-like", 3}, {"coisotropic-seam", 2}, {"legendrian-seam", 3}})
      return std::string("C-L kinds");
    std::set<std::string> legendrian;
    for (const auto& s : j.at("cl_strata"))
      if (s.at("kind") == "legendrian-seam") legendrian.insert(s.at("name").get<std::string>());
    if (legendrian != std::set<std::string>{"Seam(T2>e)", "Seam(T2>exS1)", "Seam(T2>S1xe)"})
      return std::string("Legendrian seams");
    return std::string();
  });

  run(2, "t2-on-r4 frontier Hasse diagram", 0, [] {
    const auto r = cl_stratification(build_isotropy_poset(torus_on_two_planes()));
    const Relation<std::string> arrows = {
        {"Seam(T2>exS1)", "CC(exS1)"}, {"Seam(T2>exS1)", "Seam(T2>e)"}, {"Seam(T2>S1xe)", "CC(S1xe)"},
        {"Seam(T2>S1xe)", "Seam(T2>e)"}, {"CC(exS1)", "Seam(exS1>e)"}, {"CC(S1xe)", "Seam(S1xe>e)"},
        {"Seam(T2>e)", "Seam(exS1>e)"}, {"Seam(T2>e)", "Seam(S1xe>e)"}, {"Seam(exS1>e)", "CC(e)"},
        {"Seam(S1xe>e)", "CC(e)"}};
    if (hasse_edges(r.frontier) != arrows) return std::string("Hasse edges differ");
    if (oracle::reduction(r.frontier) != arrows) return std::string("brute-force reduction differs");
    return std::string();
  });

  run(3, "s1-on-r2 reproduction", 1.0, [] {
    const auto f = circle_on_plane_fixture();
    const auto poset = build_isotropy_poset(f.spec);
    if (!is_almost_semifree(poset).value) return std::string("almost-semifree detection");
    const auto r = semifree_decomposition(poset);
    if (r.contact_strata.size() != 1 || r.contact_strata[0].dim != 1) return std::string("contact stratum");
    if (r.cl_strata.size() != 2) return std::string("C-L count");
    const auto& cc = r.stratum("CC(e)");
    const auto& seam = r.stratum("Seam(S1>e)");
    if (cc.dim != 1 || seam.dim != 0 || seam.kind != StratumKind::LegendrianSeam) return std::string("C-L strata");
    if (seam.dim != poset.dim_Q - poset.dim_G - 1) return std::string("seam dimension formula");
    // t = 1 zero-level point: x = (1, 0), u = (1, 0).
    const auto image = hilbert_map(f.spec, PhasePoint{{1, 0}, {1, 0}});
    if (image != std::vector<double>{2, 2, 0}) return std::string("Hilbert image");
    const double t = 1.0;
    const auto chart = to_circle_chart(image);
    if (chart != std::vector<double>{2 * std::sqrt(t), 1 - t, 1 + t}) return std::string("fibre point");
    const auto base = to_circle_chart(k0_project(image, f.k0_offsets));
    if (base != std::vector<double>{0, -t, t}) return std::string("k0 base point");
    return std::string();
  });

  run(4, "seeded sampling verification, both fixtures", 10.0, [] {
    for (const auto& name : fixture_names()) {
      VerifyOptions vo;
      vo.seed = 20240601;
      vo.count = 10000;
      const auto rep = verify_fixture(fixture_by_name(name), vo);
      if (!rep.pass()) return name + ": " + rep.failures.front();
      int matched = 0;
      for (const auto& [_, c] : rep.counts) matched += c;
      if (matched != vo.count) return name + ": not every sample matched";
      if (rep.principal_fraction < 0.99) return name + ": principal fraction";
    }
    return std::string();
  });

  run(5, "Reeb dynamics", 10.0, [] {
    const auto f = torus_on_two_planes_fixture();
    if (flow_invariants_closed(std::vector<double>{1, 0, 1}, 1.0) != std::vector<double>{2, 2, 0})
      return std::string("closed form at (1,0,1), t = 1");
    for (const auto& fixture : {circle_on_plane_fixture(), f}) {
      for (std::uint64_t i = 0; i < 1000; ++i) {
        const auto p = sample_zero_level_point(fixture.spec, 555, i);
        const auto image = image_of(p);
        for (double t : {0.1, 0.5, 1.0, 2.0})
          if (max_diff(image_of(flow_exact(p, t)), flow_invariants_closed(image, t)) >= 1e-9)
            return fixture.name + ": closed-form flow mismatch";
      }
    }
    for (std::uint64_t i = 0; i < 5; ++i) {
      const auto p = sample_zero_level_point(f.spec, 556, i);
      const auto traj = flow_rk4(p, 2.0, 1e-3);
      const auto& end = traj.points().back();
      const auto exact = flow_exact(p, 2.0);
      if (std::max(max_diff(end.x, exact.x), max_diff(end.u, exact.u)) >= 1e-9) return std::string("RK4 endpoint");
      const auto a = invariants(p);
      for (const auto& state : traj.points()) {
        const auto b = invariants(state);
        for (std::size_t j = 0; j < a.size(); ++j)
          if (std::abs(a[j].p4 - b[j].p4) >= 1e-9 || std::abs((a[j].p1 + a[j].p3) - (b[j].p1 + b[j].p3)) >= 1e-9)
            return std::string("conserved quantity drift");
      }
    }
    const auto model = build_torus_model(f.spec);
    int seams = 0;
    for (const auto& pattern : all_support_patterns(f.spec.n))
      for (std::uint64_t i = 0; i < 20; ++i) {
        const auto p = sample_zero_level_point(f.spec, 557, i, pattern);
        const auto before = classify_piece(model, p);
        if (before.piece != Piece::Seam) continue;
        ++seams;
        const auto after = check_reduced_membership(f.description, hilbert_map(f.spec, flow_exact(p, 0.5)));
        if (after.stratum != StratumName::cc(before.lower).str())
          return before.str() + " flowed to " + after.stratum;
      }
    if (seams == 0) return std::string("no seam samples");
    return std::string();
  });

  run(6, "property suite on random posets and weight matrices", 0, [] {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 600; ++i) {
      const auto p = oracle::random_poset(rng, 8);
      if (auto problem = poset_properties(p); !problem.empty()) return "poset " + std::to_string(i) + ": " + problem;
    }
    std::uniform_int_distribution<int> kd(1, 3), nd(1, 4);
    std::uniform_int_distribution<std::int64_t> wd(-5, 5);
    int matrices = 0;
    while (matrices < 250) {
      TorusActionSpec spec{kd(rng), nd(rng), {}};
      spec.weights.assign(spec.k, IntVector(spec.n));
      for (auto& row : spec.weights)
        for (auto& w : row) w = wd(rng);
      try {
        require_valid(spec);
      } catch (const Error&) {
        continue;
      }
      ++matrices;
      const auto p = build_isotropy_poset(spec);
      if (auto problem = poset_properties(p); !problem.empty()) return "weights: " + problem;
    }
    return std::string();
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
