#pragma once

#include <cmath>
#include <span>
#include <variant>
#include <vector>

#include "cosred/error.hpp"
#include "cosred/phase_numeric.hpp"

namespace cosred {

struct Tangent {
  std::vector<double> dx;
  std::vector<double> du;
};

enum class FlowMethod { Exact, ClosedFormInvariants, RK4 };

constexpr const char* to_string(FlowMethod m) {
  switch (m) {
    case FlowMethod::Exact: return "exact";
    case FlowMethod::ClosedFormInvariants: return "closed-form";
    case FlowMethod::RK4: return "rk4";
  }
  return "unknown";
}

/// Phase-space states for Exact/RK4, Hilbert images (3 per plane) for the
/// closed-form invariant flow.
struct Trajectory {
  std::vector<double> times;
  std::variant<std::vector<PhasePoint>, std::vector<std::vector<double>>> states;
  FlowMethod method = FlowMethod::Exact;

  const std::vector<PhasePoint>& points() const { return std::get<std::vector<PhasePoint>>(states); }
  const std::vector<std::vector<double>>& images() const { return std::get<std::vector<std::vector<double>>>(states); }
};

/// Reeb field of the Liouville form on R^{2n} × S^{2n-1}: R(x, u) = (u, 0).
inline Tangent reeb_field(const PhasePoint& p) {
  require_shape(p, -1);
  return {p.u, std::vector<double>(p.u.size(), 0.0)};
}

inline PhasePoint flow_exact(const PhasePoint& p, double t) {
  require_shape(p, -1);
  PhasePoint out = p;
  for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] += t * p.u[i];
  return out;
}

/// Quadratic-in-t flow of the invariants, per plane:
///   p1(t) = p1 + p2 t + (p1 + p3) t^2 / 2
///   p2(t) = p2 + (p1 + p3) t
///   p3(t) = p3 - p2 t - (p1 + p3) t^2 / 2
inline std::vector<double> flow_invariants_closed(std::span<const double> image, double t) {
  if (image.size() % 3 != 0) throw Error(ErrorCode::InvalidArgument, "image length must be a multiple of 3");
  std::vector<double> out(image.size());
  for (std::size_t j = 0; j < image.size(); j += 3) {
    const double p1 = image[j], p2 = image[j + 1], p3 = image[j + 2];
    const double mass = p1 + p3;
    out[j] = p1 + p2 * t + 0.5 * mass * t * t;
    out[j + 1] = p2 + mass * t;
    out[j + 2] = p3 - p2 * t - 0.5 * mass * t * t;
  }
  return out;
}

namespace detail {

inline std::vector<double> time_grid(double t_end, double step) {
  if (!(step > 0) || !(t_end > 0)) throw Error(ErrorCode::InvalidArgument, "step and t_end must be positive");
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / step - 1e-9));
  std::vector<double> times(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) times[i] = std::min(t_end, static_cast<double>(i) * step);
  times.back() = t_end;
  return times;
}

}  // namespace detail

/// Classical RK4 on the Reeb field. u is constant along the flow, so no
/// renormalization is needed.
inline Trajectory flow_rk4(const PhasePoint& start, double t_end, double step) {
  require_cosphere(start, Tolerances{}.identity);
  Trajectory traj;
  traj.method = FlowMethod::RK4;
  traj.times = detail::time_grid(t_end, step);

  std::vector<PhasePoint> states;
  states.reserve(traj.times.size());
  states.push_back(start);
  PhasePoint y = start;
  const std::size_t dim = y.x.size();

  auto axpy = [&](const PhasePoint& base, const Tangent& k, double h) {
    PhasePoint out = base;
    for (std::size_t i = 0; i < dim; ++i) {
      out.x[i] += h * k.dx[i];
      out.u[i] += h * k.du[i];
    }
    return out;
  };

  for (std::size_t s = 1; s < traj.times.size(); ++s) {
    const double h = traj.times[s] - traj.times[s - 1];
    const Tangent k1 = reeb_field(y);
    const Tangent k2 = reeb_field(axpy(y, k1, h / 2));
    const Tangent k3 = reeb_field(axpy(y, k2, h / 2));
    const Tangent k4 = reeb_field(axpy(y, k3, h));
    for (std::size_t i = 0; i < dim; ++i) {
      y.x[i] += h / 6 * (k1.dx[i] + 2 * k2.dx[i] + 2 * k3.dx[i] + k4.dx[i]);
      y.u[i] += h / 6 * (k1.du[i] + 2 * k2.du[i] + 2 * k3.du[i] + k4.du[i]);
    }
    states.push_back(y);
  }
  traj.states = std::move(states);
  return traj;
}

inline Trajectory trajectory_exact(const PhasePoint& start, std::span<const double> times) {
  require_cosphere(start, Tolerances{}.identity);
  Trajectory traj;
  traj.method = FlowMethod::Exact;
  traj.times.assign(times.begin(), times.end());
  std::vector<PhasePoint> states;
  for (double t : times) states.push_back(flow_exact(start, t));
  traj.states = std::move(states);
  return traj;
}

inline Trajectory trajectory_closed(std::span<const double> image, std::span<const double> times) {
  Trajectory traj;
  traj.method = FlowMethod::ClosedFormInvariants;
  traj.times.assign(times.begin(), times.end());
  std::vector<std::vector<double>> states;
  for (double t : times) states.push_back(flow_invariants_closed(image, t));
  traj.states = std::move(states);
  return traj;
}

}  // namespace cosred
