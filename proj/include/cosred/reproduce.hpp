#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cosred/action_model.hpp"
#include "cosred/fixtures.hpp"
#include "cosred/isotropy_poset.hpp"
#include "cosred/phase_numeric.hpp"
#include "cosred/reeb_flow.hpp"
#include "cosred/strat_engine.hpp"
#include "cosred/verification.hpp"

namespace cosred {

/// Public operations the reproduction run must touch at least once.
inline const std::vector<std::string>& public_operations() {
  static const std::vector<std::string> ops = {
      "validate",           "is_subconjugate",       "hasse_edges",           "principal_type",
      "stabilizer_of_support", "build_isotropy_poset", "is_almost_semifree",    "lifted_action_is_free",
      "starred_lattice",    "zero_level_types",      "contact_strata",        "secondary_strata",
      "classify_seam",      "cl_stratification",     "is_finer_than_contact", "bundle_targets",
      "semifree_decomposition", "single_type_reduce", "momentum",             "invariants",
      "hilbert_map",        "classify_point",        "sample_zero_level",     "check_reduced_membership",
      "k0_project",         "reeb_field",            "flow_exact",            "flow_invariants_closed",
      "flow_rk4",
  };
  return ops;
}

struct CheckResult {
  std::string fixture;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct StratumRow {
  std::string fixture;
  std::string name;
  int dim = 0;
  std::string kind;
  std::string base_target;
  int samples = 0;
};

struct ReproductionReport {
  std::vector<CheckResult> checks;
  std::vector<StratumRow> table;
  std::set<std::string> exercised;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct ReproduceOptions {
  std::uint64_t seed = 7;
  int samples = 10000;
  int flow_starts = 1000;
};

namespace detail {

class Reproducer {
 public:
  explicit Reproducer(ReproductionReport& report) : report_(report) {}

  void use(std::initializer_list<const char*> ops) {
    for (const char* op : ops) report_.exercised.insert(op);
  }

  void check(const std::string& fixture, const std::string& name, const std::function<std::string()>& body) {
    CheckResult r{fixture, name, false, {}};
    try {
      r.detail = body();
      r.pass = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    report_.checks.push_back(std::move(r));
  }

 private:
  ReproductionReport& report_;
};

inline std::string expect(bool cond, const std::string& what) { return cond ? std::string() : what; }

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Adds per-stratum sample counts, folding split branches ("CC(e)/L") together.
inline void add_counts(std::map<std::string, int>& into, const std::map<std::string, int>& counts) {
  for (const auto& [key, n] : counts) into[key.substr(0, key.find('/'))] += n;
}

inline std::vector<double> image_of(const PhasePoint& p) {
  std::vector<double> out;
  for (const auto& pl : invariants(p)) out.insert(out.end(), {pl.p1, pl.p2, pl.p3});
  return out;
}

}  // namespace detail

inline void reproduce_torus_example(detail::Reproducer& r, ReproductionReport& report,
                                    const ReproduceOptions& options) {
  using detail::expect;
  const auto fixture = torus_on_two_planes_fixture();
  const std::string fx = fixture.name;
  const auto model = build_torus_model(fixture.spec);
  const auto& poset = model.poset;
  r.use({"build_isotropy_poset"});

  r.check(fx, "isotropy lattice", [&] {
    r.use({"validate", "is_subconjugate", "principal_type", "stabilizer_of_support"});
    if (!validate(poset).ok()) return std::string("poset invalid");
    const Relation<std::string> expected = {
        {"e", "exS1"}, {"e", "S1xe"}, {"e", "T2"}, {"exS1", "T2"}, {"S1xe", "T2"}};
    const std::map<std::string, int> dims = {{"e", 4}, {"exS1", 2}, {"S1xe", 2}, {"T2", 0}};
    if (poset.order != expected) return std::string("order differs");
    if (poset.dim_Q_of != dims) return std::string("orbit-type dimensions differ");
    if (!is_subconjugate("e", "T2", poset) || is_subconjugate("exS1", "S1xe", poset))
      return std::string("subconjugacy");
    const auto stab = stabilizer_of_support(fixture.spec, {0});
    return expect(principal_type(poset).label == "e" && stab.dim_stab == 1 &&
                      model.label_of_support(mask_of({0})) == "exS1",
                  "principal type or stabilizer of plane 1");
  });

  const auto result = cl_stratification(poset);
  r.use({"cl_stratification", "starred_lattice", "zero_level_types", "contact_strata", "secondary_strata"});

  r.check(fx, "contact strata", [&] {
    const auto starred = starred_lattice(poset);
    if (starred != zero_level_types(poset) || starred.size() != 3) return std::string("starred lattice");
    std::multiset<int> dims;
    for (const auto& s : contact_strata(poset)) dims.insert(s.dim);
    return expect(dims == std::multiset<int>{3, 1, 1}, "contact dimensions");
  });

  r.check(fx, "C-L inventory", [&] {
    r.use({"classify_seam"});
    const std::map<std::string, std::pair<int, StratumKind>> expected = {
        {"CC(e)", {3, StratumKind::CosphereLike}},
        {"CC(exS1)", {1, StratumKind::CosphereLike}},
        {"CC(S1xe)", {1, StratumKind::CosphereLike}},
        {"Seam(exS1>e)", {2, StratumKind::CoisotropicSeam}},
        {"Seam(S1xe>e)", {2, StratumKind::CoisotropicSeam}},
        {"Seam(T2>e)", {1, StratumKind::LegendrianSeam}},
        {"Seam(T2>exS1)", {0, StratumKind::LegendrianSeam}},
        {"Seam(T2>S1xe)", {0, StratumKind::LegendrianSeam}},
    };
    std::map<std::string, std::pair<int, StratumKind>> got;
    for (const auto& s : result.cl_strata) got[s.id()] = {s.dim, s.kind};
    if (got != expected) return std::string("stratum list differs");
    if (secondary_strata(poset, "e").size() != 4) return std::string("secondary strata of Contact(e)");
    return expect(classify_seam(poset, "T2", "e") == StratumKind::LegendrianSeam &&
                      classify_seam(poset, "S1xe", "e") == StratumKind::CoisotropicSeam,
                  "seam classification");
  });

  r.check(fx, "C-L frontier", [&] {
    r.use({"hasse_edges"});
    const Relation<std::string> arrows = {
        {"Seam(T2>exS1)", "CC(exS1)"},    {"Seam(T2>exS1)", "Seam(T2>e)"},  {"Seam(T2>S1xe)", "CC(S1xe)"},
        {"Seam(T2>S1xe)", "Seam(T2>e)"},  {"CC(exS1)", "Seam(exS1>e)"},     {"CC(S1xe)", "Seam(S1xe>e)"},
        {"Seam(T2>e)", "Seam(exS1>e)"},   {"Seam(T2>e)", "Seam(S1xe>e)"},   {"Seam(exS1>e)", "CC(e)"},
        {"Seam(S1xe>e)", "CC(e)"},
    };
    return expect(result.hasse == arrows && hasse_edges(result.frontier) == arrows, "Hasse edges differ");
  });

  r.check(fx, "refinement and bundle targets", [&] {
    r.use({"is_finer_than_contact", "bundle_targets"});
    const auto finer = is_finer_than_contact(result);
    const auto targets = bundle_targets(result, poset);
    return expect(finer.refines && finer.strictly && targets.at("Seam(S1xe>e)") == "S1xe" &&
                      targets.at("CC(e)") == "e" && result.stratum("CC(e)").open_dense,
                  "refinement or targets");
  });

  r.check(fx, "not almost semifree", [&] {
    r.use({"is_almost_semifree", "lifted_action_is_free"});
    const auto d = is_almost_semifree(fixture.spec);
    return expect(!d.value && d.first_failure == 'b' && !lifted_action_is_free(fixture.spec), "semifree diagnosis");
  });

  r.check(fx, "seam point image", [&] {
    r.use({"hilbert_map", "check_reduced_membership", "classify_point", "invariants"});
    const PhasePoint p{{0, 0, 0, 0}, {1, 0, 0, 0}};
    const auto image = hilbert_map(fixture.spec, p);
    const auto m = check_reduced_membership(fixture.description, image);
    return expect(image == std::vector<double>{1, 0, 1, 0, 0, 0} && m.stratum == "Seam(T2>exS1)" &&
                      m.residual == 0 && classify_point(model, p) == "exS1",
                  "seam point");
  });

  std::map<std::string, int> sample_counts;
  r.check(fx, "sampling (generic)", [&] {
    r.use({"sample_zero_level", "momentum"});
    sample_zero_level(fixture.spec, options.seed, 1);
    VerifyOptions vo;
    vo.seed = options.seed;
    vo.count = options.samples;
    const auto rep = verify_fixture(fixture, vo);
    return rep.pass() ? std::string() : rep.failures.front();
  });

  r.check(fx, "sampling (every support pattern)", [&] {
    VerifyOptions vo;
    vo.seed = options.seed + 1;
    vo.count = options.samples;
    vo.patterns = all_support_patterns(fixture.spec.n);
    const auto rep = verify_fixture(fixture, vo);
    detail::add_counts(sample_counts, rep.counts);
    if (rep.counts.size() != 8) return std::string("not every C-L stratum was reached");
    return rep.pass() ? std::string() : rep.failures.front();
  });

  r.check(fx, "Reeb flow", [&] {
    r.use({"reeb_field", "flow_exact", "flow_invariants_closed", "flow_rk4", "k0_project"});
    const auto closed = flow_invariants_closed(std::vector<double>{1, 0, 1}, 1.0);
    if (closed != std::vector<double>{2, 2, 0}) return std::string("closed form at (1,0,1), t=1");
    double worst = 0;
    for (int i = 0; i < options.flow_starts; ++i) {
      const auto p = sample_zero_level_point(fixture.spec, options.seed + 2, i);
      const auto image = detail::image_of(p);
      for (double t : {0.1, 0.5, 1.0, 2.0})
        worst = std::max(worst, detail::max_abs_diff(detail::image_of(flow_exact(p, t)),
                                                     flow_invariants_closed(image, t)));
    }
    if (worst >= 1e-9) return "closed form deviates by " + std::to_string(worst);
    const auto p = sample_zero_level_point(fixture.spec, options.seed, 0);
    const auto traj = flow_rk4(p, 2.0, 1e-3);
    const auto exact = flow_exact(p, 2.0);
    const double err = std::max(detail::max_abs_diff(traj.points().back().x, exact.x),
                                detail::max_abs_diff(traj.points().back().u, exact.u));
    if (err >= 1e-9) return "RK4 endpoint error " + std::to_string(err);
    const auto field = reeb_field(p);
    if (field.dx != p.u) return std::string("Reeb field");
    // k0 with covector-mass offsets recovers |x_j|^2 on the base.
    const auto base = k0_project(detail::image_of(p), covector_mass(detail::image_of(p)));
    const double x1 = p.x[0] * p.x[0] + p.x[1] * p.x[1];
    return expect(std::abs(base[0] - x1) < 1e-9, "k0 with mass offsets");
  });

  r.check(fx, "seams flow into CC", [&] {
    for (const auto& pattern : all_support_patterns(fixture.spec.n)) {
      const auto p = sample_zero_level_point(fixture.spec, options.seed, 0, pattern);
      const auto before = classify_piece(model, p);
      if (before.piece != Piece::Seam) continue;
      const auto after = check_reduced_membership(fixture.description, hilbert_map(fixture.spec, flow_exact(p, 0.5)));
      if (after.stratum != StratumName::cc(before.lower).str())
        return before.str() + " flowed to " + after.stratum;
    }
    return std::string();
  });

  for (const auto& s : result.cl_strata) {
    auto it = sample_counts.find(s.id());
    report.table.push_back(
        {fx, s.id(), s.dim, to_string(s.kind), s.base_target, it == sample_counts.end() ? 0 : it->second});
  }
}

inline void reproduce_circle_example(detail::Reproducer& r, ReproductionReport& report,
                                     const ReproduceOptions& options) {
  using detail::expect;
  const auto fixture = circle_on_plane_fixture();
  const std::string fx = fixture.name;
  const auto model = build_torus_model(fixture.spec);
  const auto& poset = model.poset;

  r.check(fx, "isotropy lattice", [&] {
    return expect(validate(poset).ok() && poset.types.size() == 2 && poset.dim_Q_of.at("e") == 2 &&
                      poset.dim_Q_of.at("S1") == 0 && is_subconjugate("e", "S1", poset),
                  "lattice");
  });

  const auto result = semifree_decomposition(poset);
  r.check(fx, "semifree decomposition", [&] {
    if (!is_almost_semifree(fixture.spec).value || !lifted_action_is_free(fixture.spec))
      return std::string("almost semifree detection");
    if (result.contact_strata.size() != 1 || result.contact_strata.front().dim != 1)
      return std::string("contact stratum");
    if (result.cl_strata.size() != 2) return std::string("C-L strata");
    const auto& seam = result.stratum("Seam(S1>e)");
    return expect(result.stratum("CC(e)").dim == 1 && seam.dim == 0 && seam.dim == poset.dim_Q - poset.dim_G - 1 &&
                      seam.kind == StratumKind::LegendrianSeam && result.smooth_total_space &&
                      is_finer_than_contact(result).strictly,
                  "C-L strata dims or kinds");
  });

  r.check(fx, "k0 fibre over t = 1", [&] {
    const PhasePoint p{{1, 0}, {1, 0}};
    const auto image = hilbert_map(fixture.spec, p);
    if (image != std::vector<double>{2, 2, 0}) return std::string("image of t = 1 point");
    const auto m = check_reduced_membership(fixture.description, image);
    if (m.stratum != "CC(e)" || m.branch != "L") return std::string("branch of (2,2,0)");
    const auto chart = to_circle_chart(k0_project(image, fixture.k0_offsets));
    if (chart != std::vector<double>{0, -1, 1}) return std::string("k0 image");
    const auto seam = k0_project(std::vector<double>{1, 0, 1}, fixture.k0_offsets);
    return expect(seam == std::vector<double>{0, 0, 0}, "k0 of the seam");
  });

  std::map<std::string, int> sample_counts;
  r.check(fx, "sampling (generic)", [&] {
    VerifyOptions vo;
    vo.seed = options.seed;
    vo.count = options.samples;
    const auto rep = verify_fixture(fixture, vo);
    detail::add_counts(sample_counts, rep.counts);
    return rep.pass() ? std::string() : rep.failures.front();
  });

  r.check(fx, "sampling (base origin)", [&] {
    VerifyOptions vo;
    vo.seed = options.seed;
    vo.count = std::max(1, options.samples / 10);
    vo.patterns = {SupportPattern{std::vector<int>{}, std::nullopt}};
    const auto rep = verify_fixture(fixture, vo);
    detail::add_counts(sample_counts, rep.counts);
    const auto seam = rep.counts.find("Seam(S1>e)");
    return expect(rep.pass() && seam != rep.counts.end() && seam->second == vo.count, "x = 0 samples");
  });

  r.check(fx, "single orbit type", [&] {
    IsotropyPoset free_poset{{{"e", 0, true, std::nullopt}}, {}, {{"e", 4}}, 2, 4};
    const auto s = single_type_reduce(free_poset);
    return expect(s && s->dim == 3, "free action reduction");
  });

  for (const auto& s : result.cl_strata) {
    auto it = sample_counts.find(s.id());
    report.table.push_back(
        {fx, s.id(), s.dim, to_string(s.kind), s.base_target, it == sample_counts.end() ? 0 : it->second});
  }
}

inline ReproductionReport reproduce_examples(const ReproduceOptions& options = {}) {
  ReproductionReport report;
  detail::Reproducer r(report);
  r.use({"semifree_decomposition", "single_type_reduce"});
  reproduce_circle_example(r, report, options);
  reproduce_torus_example(r, report, options);
  return report;
}

}  // namespace cosred
