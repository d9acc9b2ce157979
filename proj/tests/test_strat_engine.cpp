#include <random>

#include <gtest/gtest.h>

#include "cosred/strat_engine.hpp"
#include "oracles.hpp"

using namespace cosred;

namespace {

std::map<std::string, Stratum> by_id(const std::vector<Stratum>& strata) {
  std::map<std::string, Stratum> out;
  for (const auto& s : strata) out.emplace(s.id(), s);
  return out;
}

/// Frontier generators written straight from the five rules, quantifying
/// over all label triples.
Relation<std::string> rule_oracle(const IsotropyPoset& p) {
  auto lt = [&](const std::string& a, const std::string& b) { return p.order.count({a, b}) > 0; };
  auto starred = [&](const std::string& a) { return p.quotient_dim(a) >= 1; };
  auto cc = [](const std::string& l) { return "CC(" + l + ")"; };
  auto seam = [](const std::string& h, const std::string& l) { return "Seam(" + h + ">" + l + ")"; };
  Relation<std::string> out;
  const auto labels = p.labels();
  for (const auto& h : labels)
    for (const auto& k : labels) {
      if (!starred(h) || !lt(h, k)) continue;
      if (starred(k)) out.emplace(cc(k), cc(h));
      out.emplace(seam(k, h), cc(h));
      if (starred(k)) out.emplace(cc(k), seam(k, h));
      for (const auto& x : labels) {
        if (lt(k, x)) out.emplace(seam(x, h), seam(k, h));
        if (starred(x) && lt(h, x) && lt(x, k)) out.emplace(seam(k, x), seam(k, h));
      }
    }
  return out;
}

IsotropyPoset torus() { return build_isotropy_poset(torus_on_two_planes()); }

}  // namespace

TEST(Strat, TorusContactStrata) {
  const auto p = torus();
  EXPECT_EQ(starred_lattice(p), (std::vector<std::string>{"e", "S1xe", "exS1"}));
  EXPECT_EQ(zero_level_types(p), starred_lattice(p));
  const auto contact = by_id(contact_strata(p));
  EXPECT_EQ(contact.at("Contact(e)").dim, 3);
  EXPECT_EQ(contact.at("Contact(exS1)").dim, 1);
  EXPECT_EQ(contact.at("Contact(S1xe)").dim, 1);
  EXPECT_EQ(contact_frontier(p), (Relation<std::string>{{"Contact(S1xe)", "Contact(e)"}, {"Contact(exS1)", "Contact(e)"}}));
}

TEST(Strat, TorusSecondaryOfPrincipal) {
  const auto s = by_id(secondary_strata(torus(), "e"));
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s.at("CC(e)").dim, 3);
  EXPECT_EQ(s.at("Seam(exS1>e)").dim, 2);
  EXPECT_EQ(s.at("Seam(exS1>e)").kind, StratumKind::CoisotropicSeam);
  EXPECT_EQ(s.at("Seam(T2>e)").dim, 1);
  EXPECT_EQ(s.at("Seam(T2>e)").kind, StratumKind::LegendrianSeam);
  try {
    secondary_strata(torus(), "T2");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotStarredType);
  }
}

TEST(Strat, ClassifySeamErrors) {
  const auto p = torus();
  EXPECT_EQ(classify_seam(p, "T2", "exS1"), StratumKind::LegendrianSeam);
  try {
    classify_seam(p, "e", "T2");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSuchSeam);
  }
  EXPECT_THROW(classify_seam(p, "S1xe", "exS1"), Error);
}

TEST(Strat, TorusInventoryAndHasse) {
  const auto p = torus();
  const auto r = cl_stratification(p);
  std::multiset<int> dims;
  std::map<StratumKind, int> kinds;
  for (const auto& s : r.cl_strata) {
    dims.insert(s.dim);
    ++kinds[s.kind];
  }
  EXPECT_EQ(dims, (std::multiset<int>{3, 2, 2, 1, 1, 1, 0, 0}));
  EXPECT_EQ(kinds[StratumKind::CosphereLike], 3);
  EXPECT_EQ(kinds[StratumKind::CoisotropicSeam], 2);
  EXPECT_EQ(kinds[StratumKind::LegendrianSeam], 3);

  const Relation<std::string> arrows = {
      {"Seam(T2>exS1)", "CC(exS1)"}, {"Seam(T2>exS1)", "Seam(T2>e)"}, {"Seam(T2>S1xe)", "CC(S1xe)"},
      {"Seam(T2>S1xe)", "Seam(T2>e)"}, {"CC(exS1)", "Seam(exS1>e)"}, {"CC(S1xe)", "Seam(S1xe>e)"},
      {"Seam(T2>e)", "Seam(exS1>e)"}, {"Seam(T2>e)", "Seam(S1xe>e)"}, {"Seam(exS1>e)", "CC(e)"},
      {"Seam(S1xe>e)", "CC(e)"}};
  EXPECT_EQ(r.hasse, arrows);
  EXPECT_TRUE(r.closure_only.count({"Seam(T2>exS1)", "CC(e)"}));
  EXPECT_FALSE(r.generators.count({"Seam(T2>exS1)", "CC(e)"}));
  EXPECT_TRUE(r.stratum("CC(e)").open_dense);
  EXPECT_FALSE(r.stratum("CC(exS1)").open_dense);
  EXPECT_THROW(r.stratum("CC(T2)"), Error);

  const auto finer = is_finer_than_contact(r);
  EXPECT_TRUE(finer.refines);
  EXPECT_TRUE(finer.strictly);
  const auto targets = bundle_targets(r, p);
  EXPECT_EQ(targets.at("Seam(T2>exS1)"), "T2");
  EXPECT_EQ(targets.at("CC(S1xe)"), "S1xe");
}

TEST(Strat, DisconnectedBaseDropsDensity) {
  const auto r = cl_stratification(torus(), StratOptions{false});
  for (const auto& s : r.cl_strata) EXPECT_FALSE(s.open_dense);
  EXPECT_FALSE(r.base_connected);
}

TEST(Strat, SemifreeCircle) {
  const auto r = semifree_decomposition(circle_on_plane());
  EXPECT_TRUE(r.smooth_total_space);
  ASSERT_EQ(r.contact_strata.size(), 1u);
  EXPECT_EQ(r.contact_strata[0].dim, 1);
  EXPECT_EQ(r.stratum("CC(e)").dim, 1);
  EXPECT_EQ(r.stratum("Seam(S1>e)").dim, 0);
  EXPECT_EQ(r.stratum("Seam(S1>e)").kind, StratumKind::LegendrianSeam);
}

TEST(Strat, SemifreeDoubleWeight) {
  const auto r = semifree_decomposition(TorusActionSpec{1, 2, {{1, 1}}});
  EXPECT_EQ(r.stratum("CC(e)").dim, 5);
  EXPECT_EQ(r.stratum("Seam(S1>e)").dim, 2);
  try {
    semifree_decomposition(torus_on_two_planes());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAlmostSemifree);
  }
}

TEST(Strat, SingleType) {
  IsotropyPoset free_action{{{"e", 0, true, std::nullopt}}, {}, {{"e", 6}}, 1, 6};
  const auto s = single_type_reduce(free_action);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->dim, 9);
  IsotropyPoset point{{{"T1", 1, false, std::nullopt}}, {}, {{"T1", 0}}, 1, 0};
  EXPECT_FALSE(single_type_reduce(point).has_value());
  try {
    single_type_reduce(torus());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MultipleOrbitTypes);
  }
}

TEST(StratProperty, RandomPosets) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 600; ++trial) {
    const auto p = oracle::random_poset(rng);
    const auto r = cl_stratification(p);

    std::set<std::string> starred;
    for (const auto& t : p.types)
      if (p.dim_Q_of.at(t.label) - p.dim_G + t.dim_H >= 1) starred.insert(t.label);
    ASSERT_EQ(std::set<std::string>(r.starred_types.begin(), r.starred_types.end()), starred);

    std::size_t seams = 0;
    for (const auto& l : starred)
      for (const auto& t : p.types) seams += p.order.count({l, t.label});
    ASSERT_EQ(r.cl_strata.size(), starred.size() + seams);

    int open_dense = 0;
    for (const auto& s : r.cl_strata) {
      open_dense += s.open_dense;
      const int ql = p.dim_Q_of.at(s.name.lower) - p.dim_G + p.type(s.name.lower).dim_H;
      if (s.name.piece == Piece::CC) {
        ASSERT_EQ(s.dim, 2 * ql - 1);
        continue;
      }
      const int qh = p.dim_Q_of.at(s.name.upper) - p.dim_G + p.type(s.name.upper).dim_H;
      ASSERT_GE(s.dim, 0);
      ASSERT_EQ(s.dim, qh + ql - 1);
      const int excess = s.dim - (2 * ql - 2) / 2;
      ASSERT_EQ(excess, qh);
      ASSERT_EQ(excess == 0, s.kind == StratumKind::LegendrianSeam);
      ASSERT_EQ(excess == 0, !starred.count(s.name.upper));
      // H = L in the seam formula gives the cosphere dimension.
      ASSERT_EQ(detail::seam_dim(p, s.name.lower, s.name.lower), 2 * ql - 1);
    }

    std::size_t minimal = 0;
    std::string principal;
    for (const auto& t : p.types) {
      bool below = false;
      for (const auto& [a, b] : p.order) below = below || b == t.label;
      if (!below) {
        ++minimal;
        principal = t.label;
      }
    }
    ASSERT_EQ(open_dense, minimal == 1 && starred.count(principal) ? 1 : 0);

    ASSERT_EQ(r.generators, rule_oracle(p));
    ASSERT_EQ(r.frontier, oracle::closure(r.generators));
    ASSERT_TRUE(is_acyclic(r.frontier));
    ASSERT_EQ(r.hasse, oracle::reduction(r.frontier));
    ASSERT_EQ(transitive_closure(r.hasse), r.frontier);
    ASSERT_TRUE(is_finer_than_contact(r).refines);
  }
}
