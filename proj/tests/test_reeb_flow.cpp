#include <cmath>

#include <gtest/gtest.h>

#include "cosred/fixtures.hpp"
#include "cosred/reeb_flow.hpp"

using namespace cosred;

namespace {

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

}  // namespace

TEST(Reeb, FieldIsCovector) {
  const PhasePoint p{{1, 2}, {0.6, 0.8}};
  const auto v = reeb_field(p);
  EXPECT_EQ(v.dx, p.u);
  EXPECT_EQ(v.du, (std::vector<double>{0, 0}));
}

TEST(Reeb, ClosedFormSpecificValue) {
  EXPECT_EQ(flow_invariants_closed(std::vector<double>{1, 0, 1}, 1.0), (std::vector<double>{2, 2, 0}));
  EXPECT_EQ(flow_invariants_closed(std::vector<double>{1, 0, 1}, 0.0), (std::vector<double>{1, 0, 1}));
  EXPECT_THROW(flow_invariants_closed(std::vector<double>{1, 0}, 1.0), Error);
}

TEST(Reeb, ClosedFormMatchesExactFlow) {
  // Oracle: expand |x + t u|^2 and (x + t u)·u by hand.
  const auto spec = torus_on_two_planes();
  for (const auto& p : sample_zero_level(spec, 77, 300)) {
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
      const auto moved = flow_exact(p, t);
      const auto closed = flow_invariants_closed(image_of(p), t);
      EXPECT_LT(max_diff(image_of(moved), closed), 1e-9);
      for (int j = 0; j < spec.n; ++j) {
        const double x1 = p.x[2 * j], x2 = p.x[2 * j + 1], u1 = p.u[2 * j], u2 = p.u[2 * j + 1];
        const double xx = x1 * x1 + x2 * x2, xu = x1 * u1 + x2 * u2, uu = u1 * u1 + u2 * u2;
        const double xt = xx + 2 * t * xu + t * t * uu;
        EXPECT_NEAR(closed[3 * j], xt + uu, 1e-9);
        EXPECT_NEAR(closed[3 * j + 1], 2 * (xu + t * uu), 1e-9);
        EXPECT_NEAR(closed[3 * j + 2], uu - xt, 1e-9);
      }
      EXPECT_LT(norm(momentum(spec, moved)), 1e-9);
    }
  }
}

TEST(Reeb, Rk4MatchesExact) {
  const auto spec = TorusActionSpec{1, 2, {{1, 1}}};
  const auto p = sample_zero_level_point(spec, 4, 0);
  const auto traj = flow_rk4(p, 2.0, 1e-3);
  ASSERT_EQ(traj.times.size(), 2001u);
  EXPECT_DOUBLE_EQ(traj.times.back(), 2.0);
  const auto exact = flow_exact(p, 2.0);
  EXPECT_LT(max_diff(traj.points().back().x, exact.x), 1e-9);
  const auto start = invariants(p), end = invariants(traj.points().back());
  for (std::size_t j = 0; j < start.size(); ++j) {
    EXPECT_NEAR(start[j].p4, end[j].p4, 1e-9);
    EXPECT_NEAR(start[j].p1 + start[j].p3, end[j].p1 + end[j].p3, 1e-9);
  }
}

TEST(Reeb, Trajectories) {
  const PhasePoint p{{0, 0}, {1, 0}};
  const std::vector<double> times = {0, 0.5, 1};
  const auto exact = trajectory_exact(p, times);
  EXPECT_EQ(exact.points().size(), 3u);
  EXPECT_EQ(exact.points()[2].x, (std::vector<double>{1, 0}));
  const auto closed = trajectory_closed(image_of(p), times);
  EXPECT_EQ(closed.images()[2], (std::vector<double>{2, 2, 0}));
  EXPECT_THROW(closed.points(), std::bad_variant_access);
  EXPECT_THROW(flow_rk4(PhasePoint{{0, 0}, {2, 0}}, 1.0, 0.1), Error);
  EXPECT_THROW(flow_rk4(p, 1.0, 0.0), Error);
  EXPECT_EQ(detail::time_grid(1.0, 0.3).size(), 5u);
}

TEST(Reeb, SeamsFlowIntoCosphereLikePiece) {
  const auto f = torus_on_two_planes_fixture();
  const auto model = build_torus_model(f.spec);
  const std::vector<SupportPattern> seam_patterns = {
      {std::vector<int>{}, std::nullopt}, {std::vector<int>{0}, std::nullopt}, {std::vector<int>{1}, std::nullopt},
      {std::vector<int>{}, std::vector<int>{0}}, {std::vector<int>{}, std::vector<int>{1}}};
  for (const auto& pattern : seam_patterns)
    for (std::uint64_t i = 0; i < 40; ++i) {
      const auto p = sample_zero_level_point(f.spec, 8, i, pattern);
      const auto before = classify_piece(model, p);
      ASSERT_EQ(before.piece, Piece::Seam);
      const auto after = check_reduced_membership(f.description, hilbert_map(f.spec, flow_exact(p, 0.5)));
      EXPECT_EQ(after.stratum, StratumName::cc(before.lower).str());
    }
}
