#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cosred/action_model.hpp"
#include "cosred/error.hpp"
#include "cosred/strat_engine.hpp"

namespace cosred {

/// A covector u at base point x in R^{2n}; plane j occupies slots 2j, 2j+1
/// of both vectors. Cosphere representatives have |u| = 1.
struct PhasePoint {
  std::vector<double> x;
  std::vector<double> u;

  int planes() const { return static_cast<int>(x.size() / 2); }
};

struct PlaneInvariants {
  double p1 = 0;  // |x_j|^2 + |u_j|^2
  double p2 = 0;  // 2 x_j·u_j
  double p3 = 0;  // |u_j|^2 - |x_j|^2
  double p4 = 0;  // x_j1 u_j2 - x_j2 u_j1
};

using InvariantVector = std::vector<PlaneInvariants>;

struct Tolerances {
  double constraint = 1e-10;   // constructed constraints (momentum level)
  double identity = 1e-9;      // polynomial identities
  double band = 1e-8;          // strict inequalities and semialgebraic equalities
  double support = 1e-10;      // plane support detection
  double cosphere = 1e-12;     // |u| = 1
};

inline double norm(std::span<const double> v) {
  double s = 0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

inline void require_shape(const PhasePoint& p, int n) {
  if (p.x.size() != p.u.size() || p.x.size() % 2 != 0)
    throw Error(ErrorCode::InvalidPoint, "x and u must have equal even length");
  if (n >= 0 && p.planes() != n)
    throw Error(ErrorCode::InvalidPoint, "point has " + std::to_string(p.planes()) + " planes, expected " +
                                             std::to_string(n));
}

inline bool is_cosphere_representative(const PhasePoint& p, double tol = Tolerances{}.cosphere) {
  return std::abs(norm(p.u) - 1.0) <= tol;
}

inline void require_cosphere(const PhasePoint& p, double tol = Tolerances{}.cosphere) {
  require_shape(p, -1);
  if (!is_cosphere_representative(p, tol)) throw Error(ErrorCode::InvalidPoint, "covector is not unit length");
}

inline InvariantVector invariants(const PhasePoint& p) {
  require_shape(p, -1);
  InvariantVector out(p.planes());
  for (int j = 0; j < p.planes(); ++j) {
    const double x1 = p.x[2 * j], x2 = p.x[2 * j + 1];
    const double u1 = p.u[2 * j], u2 = p.u[2 * j + 1];
    const double xx = x1 * x1 + x2 * x2;
    const double uu = u1 * u1 + u2 * u2;
    out[j] = {xx + uu, 2 * (x1 * u1 + x2 * u2), uu - xx, x1 * u2 - x2 * u1};
  }
  return out;
}

/// Contact momentum map: component i is Σ_j A[i][j]·p4_j.
inline std::vector<double> momentum(const TorusActionSpec& spec, const PhasePoint& p) {
  require_shape(p, spec.n);
  const auto inv = invariants(p);
  std::vector<double> j(spec.k, 0.0);
  for (int i = 0; i < spec.k; ++i)
    for (int plane = 0; plane < spec.n; ++plane) j[i] += static_cast<double>(spec.weights[i][plane]) * inv[plane].p4;
  return j;
}

/// Hilbert map on the zero level: (p1, p2, p3) per plane, p4 dropped.
inline std::vector<double> hilbert_map(const TorusActionSpec& spec, const PhasePoint& p,
                                       double tol = Tolerances{}.constraint) {
  const auto j = momentum(spec, p);
  if (norm(j) >= tol) throw Error(ErrorCode::NotOnZeroLevel, "|J| = " + std::to_string(norm(j)));
  std::vector<double> out;
  out.reserve(3 * spec.n);
  for (const auto& pl : invariants(p)) {
    out.push_back(pl.p1);
    out.push_back(pl.p2);
    out.push_back(pl.p3);
  }
  return out;
}

struct PointSupport {
  SupportMask full = 0;  // planes where (x_j, u_j) is nonzero
  SupportMask base = 0;  // planes where x_j is nonzero
};

inline PointSupport point_support(const PhasePoint& p, double tol = Tolerances{}.support) {
  require_shape(p, -1);
  PointSupport s;
  for (int j = 0; j < p.planes(); ++j) {
    const double xs = std::hypot(p.x[2 * j], p.x[2 * j + 1]);
    const double us = std::hypot(p.u[2 * j], p.u[2 * j + 1]);
    if (std::hypot(xs, us) > tol) s.full |= SupportMask{1} << j;
    if (xs > tol) s.base |= SupportMask{1} << j;
  }
  return s;
}

/// Orbit type of the covector, which equals that of its cosphere class.
inline std::string classify_point(const TorusModel& model, const PhasePoint& p, double tol = Tolerances{}.support) {
  require_shape(p, model.spec.n);
  return model.label_of_support(point_support(p, tol).full);
}

/// C-L piece of a zero-level point read off from supports: the contact
/// stratum is the type of (x, u), the base target the type of x.
inline StratumName classify_piece(const TorusModel& model, const PhasePoint& p, double tol = Tolerances{}.support) {
  require_shape(p, model.spec.n);
  const auto s = point_support(p, tol);
  const auto& l = model.label_of_support(s.full);
  const auto& h = model.label_of_support(s.base);
  return h == l ? StratumName::cc(l) : StratumName::seam(h, l);
}

/// Planes where x (resp. u) may be nonzero; unset means every plane.
struct SupportPattern {
  std::optional<std::vector<int>> x_planes;
  std::optional<std::vector<int>> u_planes;
};

struct SamplerOptions {
  int max_retries = 64;
  double constraint_tol = Tolerances{}.constraint;
};

namespace detail {

inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

inline std::vector<int> planes_or_all(const std::optional<std::vector<int>>& planes, int n) {
  if (planes) {
    for (int j : *planes)
      if (j < 0 || j >= n) throw Error(ErrorCode::InvalidArgument, "support pattern plane out of range");
    return *planes;
  }
  std::vector<int> all(n);
  for (int j = 0; j < n; ++j) all[j] = j;
  return all;
}

}  // namespace detail

/// One zero-level cosphere point, a pure function of (seed, index).
/// Momentum is linear in u for fixed x, J = M(x)·u, so u is drawn from an
/// orthonormal basis of ker M(x) restricted to the allowed coordinates.
inline PhasePoint sample_zero_level_point(const TorusActionSpec& spec, std::uint64_t seed, std::uint64_t index,
                                          const SupportPattern& pattern = {}, const SamplerOptions& options = {}) {
  const auto x_planes = detail::planes_or_all(pattern.x_planes, spec.n);
  const auto u_planes = detail::planes_or_all(pattern.u_planes, spec.n);
  if (u_planes.empty()) throw Error(ErrorCode::EmptyKernel, "no admissible covector: u support is empty");

  auto rng = detail::sample_rng(seed, index);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int m = 2 * static_cast<int>(u_planes.size());

  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    PhasePoint p{std::vector<double>(2 * spec.n, 0.0), std::vector<double>(2 * spec.n, 0.0)};
    for (int j : x_planes) {
      p.x[2 * j] = gauss(rng);
      p.x[2 * j + 1] = gauss(rng);
    }

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(spec.k, m);
    for (int i = 0; i < spec.k; ++i)
      for (std::size_t c = 0; c < u_planes.size(); ++c) {
        const int j = u_planes[c];
        const double a = static_cast<double>(spec.weights[i][j]);
        M(i, 2 * c) = -a * p.x[2 * j + 1];
        M(i, 2 * c + 1) = a * p.x[2 * j];
      }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-12 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > cutoff) ++rank;
    const int kernel_dim = m - rank;
    if (kernel_dim == 0) continue;

    Eigen::VectorXd g(kernel_dim);
    for (int i = 0; i < kernel_dim; ++i) g(i) = gauss(rng);
    Eigen::VectorXd u_sub = svd.matrixV().rightCols(kernel_dim) * g;
    const double len = u_sub.norm();
    if (len < 1e-12) continue;
    u_sub /= len;
    for (std::size_t c = 0; c < u_planes.size(); ++c) {
      p.u[2 * u_planes[c]] = u_sub(2 * c);
      p.u[2 * u_planes[c] + 1] = u_sub(2 * c + 1);
    }
    if (norm(momentum(spec, p)) < options.constraint_tol) return p;
  }
  throw Error(ErrorCode::RetriesExhausted, "no zero-level point after " + std::to_string(options.max_retries) +
                                               " attempts");
}

inline std::vector<PhasePoint> sample_zero_level(const TorusActionSpec& spec, std::uint64_t seed, int count,
                                                 const SupportPattern& pattern = {},
                                                 const SamplerOptions& options = {}) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be at least 1");
  require_valid(spec);
  std::vector<PhasePoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sample_zero_level_point(spec, seed, i, pattern, options));
  return out;
}

// ---------------------------------------------------------------------------
// Semialgebraic descriptions of reduced spaces

enum class PredicateKind { Zero, Positive, NonZero, NonNegative };

struct Predicate {
  PredicateKind kind = PredicateKind::Zero;
  std::string text;
  std::function<double(std::span<const double>)> value;
};

/// One piece of a reduced space in Hilbert-image coordinates. `branch`
/// names a connected component when a stratum is split (e.g. L and R).
struct PieceDescription {
  std::string stratum;
  std::string branch;
  std::vector<Predicate> predicates;
};

struct SemialgebraicDescription {
  int image_size = 0;
  std::vector<PieceDescription> pieces;
};

struct Membership {
  std::string stratum;
  std::string branch;
  double residual = 0;  // max |equality| over the matched piece
};

namespace detail {

/// (max equality residual, all predicates satisfied)
inline std::pair<double, bool> evaluate_piece(const PieceDescription& piece, std::span<const double> image,
                                              double band) {
  double residual = 0;
  bool ok = true;
  for (const auto& pred : piece.predicates) {
    const double v = pred.value(image);
    switch (pred.kind) {
      case PredicateKind::Zero:
        residual = std::max(residual, std::abs(v));
        ok = ok && std::abs(v) <= band;
        break;
      case PredicateKind::Positive: ok = ok && v > band; break;
      case PredicateKind::NonZero: ok = ok && std::abs(v) > band; break;
      case PredicateKind::NonNegative: ok = ok && v >= -band; break;
    }
  }
  return {residual, ok};
}

}  // namespace detail

inline Membership check_reduced_membership(const SemialgebraicDescription& description, std::span<const double> image,
                                           double band = Tolerances{}.band) {
  if (static_cast<int>(image.size()) != description.image_size)
    throw Error(ErrorCode::InvalidArgument, "image has wrong length");
  std::optional<Membership> found;
  double closest = INFINITY;
  for (const auto& piece : description.pieces) {
    auto [residual, ok] = detail::evaluate_piece(piece, image, band);
    closest = std::min(closest, residual);
    if (!ok) continue;
    if (found)
      throw Error(ErrorCode::AmbiguousStratum, "image matches both " + found->stratum + " and " + piece.stratum);
    found = Membership{piece.stratum, piece.branch, residual};
  }
  if (!found)
    throw Error(ErrorCode::NoMatchingStratum, "no stratum within tolerance (smallest equality residual " +
                                                  std::to_string(closest) + ")");
  return *found;
}

/// Projection of the reduced space to Q/G in Hilbert coordinates:
/// (p1 − c, 0, c − p1) per plane. With c = 1 this is the printed formula of
/// both builtin examples; c_j = |u_j|^2 recovers the base point exactly.
inline std::vector<double> k0_project(std::span<const double> image, std::span<const double> offsets = {}) {
  if (image.size() % 3 != 0) throw Error(ErrorCode::InvalidArgument, "image length must be a multiple of 3");
  const std::size_t n = image.size() / 3;
  if (!offsets.empty() && offsets.size() != n) throw Error(ErrorCode::InvalidArgument, "one offset per plane");
  std::vector<double> out(image.size());
  for (std::size_t j = 0; j < n; ++j) {
    const double c = offsets.empty() ? 1.0 : offsets[j];
    out[3 * j] = image[3 * j] - c;
    out[3 * j + 1] = 0.0;
    out[3 * j + 2] = c - image[3 * j];
  }
  return out;
}

/// Per-plane covector mass (p1 + p3)/2 = |u_j|^2.
inline std::vector<double> covector_mass(std::span<const double> image) {
  std::vector<double> out(image.size() / 3);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = 0.5 * (image[3 * j] + image[3 * j + 2]);
  return out;
}

/// The circle example writes its invariants as (σ2, σ3, σ1); Hilbert images
/// here are (σ1, σ2, σ3).
inline std::vector<double> to_circle_chart(std::span<const double> image) {
  return {image[1], image[2], image[0]};
}

inline std::vector<double> from_circle_chart(std::span<const double> chart) {
  return {chart[2], chart[0], chart[1]};
}

}  // namespace cosred
