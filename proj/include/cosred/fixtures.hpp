#pragma once

#include <span>
#include <string>
#include <vector>

#include "cosred/action_model.hpp"
#include "cosred/error.hpp"
#include "cosred/phase_numeric.hpp"

namespace cosred {

/// A builtin example: the action plus the explicit semialgebraic
/// presentation of every C-L piece of its zero-momentum reduced space.
struct Fixture {
  std::string name;
  TorusActionSpec spec;
  SemialgebraicDescription description;
  std::vector<double> k0_offsets;
};

namespace detail {

using Image = std::span<const double>;

inline Predicate zero(std::string text, std::function<double(Image)> f) {
  return {PredicateKind::Zero, std::move(text), std::move(f)};
}
inline Predicate positive(std::string text, std::function<double(Image)> f) {
  return {PredicateKind::Positive, std::move(text), std::move(f)};
}
inline Predicate nonzero(std::string text, std::function<double(Image)> f) {
  return {PredicateKind::NonZero, std::move(text), std::move(f)};
}
inline Predicate nonnegative(std::string text, std::function<double(Image)> f) {
  return {PredicateKind::NonNegative, std::move(text), std::move(f)};
}

/// p1^2 = p2^2 + p3^2 for the plane starting at `at`, scaled to O(1).
inline Predicate cone(std::string text, int at) {
  return zero(std::move(text), [at](Image v) {
    const double a = v[at], b = v[at + 1], c = v[at + 2];
    return (a * a - b * b - c * c) / std::max(1.0, a * a);
  });
}

inline std::vector<Predicate> with(std::vector<Predicate> base, std::vector<Predicate> extra) {
  base.insert(base.end(), std::make_move_iterator(extra.begin()), std::make_move_iterator(extra.end()));
  return base;
}

}  // namespace detail

/// S^1 on R^2. Image (σ1, σ2, σ3); C_0 is the parabola σ1^2 = σ2^2 + σ3^2,
/// σ1 + σ3 = 2, split as L (σ2 > 0), R (σ2 < 0) and the seam (1, 0, 1).
inline Fixture circle_on_plane_fixture() {
  using namespace detail;
  Fixture f;
  f.name = "s1-on-r2";
  f.spec = circle_on_plane();
  f.description.image_size = 3;
  f.k0_offsets = {1.0};

  const std::vector<Predicate> common = {
      nonnegative("s1 >= 0", [](Image v) { return v[0]; }),
      cone("s1^2 = s2^2 + s3^2", 0),
      zero("s1 + s3 = 2", [](Image v) { return v[0] + v[2] - 2.0; }),
  };
  f.description.pieces = {
      {"CC(e)", "L", with(common, {positive("s2 > 0", [](Image v) { return v[1]; })})},
      {"CC(e)", "R", with(common, {positive("s2 < 0", [](Image v) { return -v[1]; })})},
      {"Seam(S1>e)", "",
       with(common, {zero("s2 = 0", [](Image v) { return v[1]; }), zero("s1 = 1", [](Image v) { return v[0] - 1.0; }),
                     zero("s3 = 1", [](Image v) { return v[2] - 1.0; })})},
  };
  return f;
}

/// T^2 on R^2 × R^2. Image (ρ1, ρ2, ρ3; σ1, σ2, σ3); eight C-L pieces.
inline Fixture torus_on_two_planes_fixture() {
  using namespace detail;
  Fixture f;
  f.name = "t2-on-r4";
  f.spec = torus_on_two_planes();
  f.description.image_size = 6;
  f.k0_offsets = {1.0, 1.0};

  auto r1 = [](Image v) { return v[0]; };
  auto r2 = [](Image v) { return v[1]; };
  auto r3 = [](Image v) { return v[2]; };
  auto s1 = [](Image v) { return v[3]; };
  auto s2 = [](Image v) { return v[4]; };
  auto s3 = [](Image v) { return v[5]; };
  auto r1_minus_r3 = [](Image v) { return v[0] - v[2]; };
  auto s1_minus_s3 = [](Image v) { return v[3] - v[5]; };

  const std::vector<Predicate> common = {
      nonnegative("r1 >= 0", r1),
      nonnegative("s1 >= 0", s1),
      cone("r1^2 = r2^2 + r3^2", 0),
      cone("s1^2 = s2^2 + s3^2", 3),
      zero("r1 + r3 + s1 + s3 = 2", [](Image v) { return v[0] + v[2] + v[3] + v[5] - 2.0; }),
  };
  const std::vector<Predicate> both_planes = {positive("r1 > 0", r1), positive("s1 > 0", s1)};
  auto sigma_zero = std::vector<Predicate>{zero("s1 = 0", s1), zero("s2 = 0", s2), zero("s3 = 0", s3)};
  auto rho_zero = std::vector<Predicate>{zero("r1 = 0", r1), zero("r2 = 0", r2), zero("r3 = 0", r3)};

  f.description.pieces = {
      {"CC(e)", "",
       with(with(common, both_planes), {nonzero("r1 != r3", r1_minus_r3), nonzero("s1 != s3", s1_minus_s3)})},
      {"Seam(S1xe>e)", "",
       with(with(common, both_planes),
            {nonzero("s1 != s3", s1_minus_s3), zero("r1 = r3", r1_minus_r3), zero("r2 = 0", r2)})},
      {"Seam(exS1>e)", "",
       with(with(common, both_planes),
            {nonzero("r1 != r3", r1_minus_r3), zero("s1 = s3", s1_minus_s3), zero("s2 = 0", s2)})},
      {"Seam(T2>e)", "",
       with(with(common, both_planes),
            {zero("r1 = r3", r1_minus_r3), zero("s1 = s3", s1_minus_s3), zero("r2 = 0", r2), zero("s2 = 0", s2),
             zero("r1 + s1 = 1", [](Image v) { return v[0] + v[3] - 1.0; })})},
      {"CC(exS1)", "",
       with(with(common, sigma_zero), {positive("r1 > 0", r1), nonzero("r1 != r3", r1_minus_r3)})},
      {"Seam(T2>exS1)", "",
       with(with(common, sigma_zero), {zero("r1 = 1", [](Image v) { return v[0] - 1.0; }), zero("r2 = 0", r2),
                                       zero("r3 = 1", [](Image v) { return v[2] - 1.0; })})},
      {"CC(S1xe)", "",
       with(with(common, rho_zero), {positive("s1 > 0", s1), nonzero("s1 != s3", s1_minus_s3)})},
      {"Seam(T2>S1xe)", "",
       with(with(common, rho_zero), {zero("s1 = 1", [](Image v) { return v[3] - 1.0; }), zero("s2 = 0", s2),
                                     zero("s3 = 1", [](Image v) { return v[5] - 1.0; })})},
  };
  return f;
}

inline std::vector<std::string> fixture_names() { return {"s1-on-r2", "t2-on-r4"}; }

inline Fixture fixture_by_name(const std::string& name) {
  if (name == "s1-on-r2") return circle_on_plane_fixture();
  if (name == "t2-on-r4") return torus_on_two_planes_fixture();
  throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + name + "' (expected s1-on-r2 or t2-on-r4)");
}

}  // namespace cosred
