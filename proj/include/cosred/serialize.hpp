#pragma once

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cosred/action_model.hpp"
#include "cosred/error.hpp"
#include "cosred/isotropy_poset.hpp"
#include "cosred/phase_numeric.hpp"
#include "cosred/reeb_flow.hpp"
#include "cosred/strat_engine.hpp"

namespace cosred {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Poset: {"dim_Q", "dim_G", "types": [{"label", "dim_H", "dim_Q_of", "finite_tag"?}], "order": [[a, b]]}

inline json poset_to_json(const IsotropyPoset& poset) {
  json types = json::array();
  for (const auto& t : poset.types) {
    json entry = {{"label", t.label}, {"dim_H", t.dim_H}, {"dim_Q_of", poset.dim_Q_of.at(t.label)}};
    if (t.finite_tag) entry["finite_tag"] = *t.finite_tag;
    if (t.is_identity) entry["is_identity"] = true;
    types.push_back(std::move(entry));
  }
  json order = json::array();
  for (const auto& [a, b] : poset.order) order.push_back({a, b});
  return {{"dim_Q", poset.dim_Q}, {"dim_G", poset.dim_G}, {"types", types}, {"order", order}};
}

inline IsotropyPoset poset_from_json(const json& j) {
  try {
    IsotropyPoset poset;
    poset.dim_Q = j.at("dim_Q").get<int>();
    poset.dim_G = j.at("dim_G").get<int>();
    for (const auto& entry : j.at("types")) {
      OrbitType t;
      t.label = entry.at("label").get<std::string>();
      t.dim_H = entry.at("dim_H").get<int>();
      if (entry.contains("finite_tag") && !entry["finite_tag"].is_null())
        t.finite_tag = entry["finite_tag"].get<std::string>();
      // Unless stated, a dimension-zero type without a finite part is the identity.
      t.is_identity = entry.contains("is_identity") ? entry["is_identity"].get<bool>()
                                                    : (t.dim_H == 0 && !t.finite_tag);
      poset.dim_Q_of[t.label] = entry.at("dim_Q_of").get<int>();
      poset.types.push_back(std::move(t));
    }
    if (j.contains("order"))
      for (const auto& pair : j.at("order")) {
        if (!pair.is_array() || pair.size() != 2) throw Error(ErrorCode::InvalidPoset, "order entries must be pairs");
        poset.order.emplace(pair[0].get<std::string>(), pair[1].get<std::string>());
      }
    return poset;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidPoset, e.what());
  }
}

// ---------------------------------------------------------------------------
// Action spec: {"k", "n", "weights": [[...], ...]} (k rows of n entries)

inline json action_to_json(const TorusActionSpec& spec) {
  return {{"k", spec.k}, {"n", spec.n}, {"weights", spec.weights}};
}

inline TorusActionSpec action_from_json(const json& j) {
  try {
    TorusActionSpec spec;
    spec.k = j.at("k").get<int>();
    spec.n = j.at("n").get<int>();
    spec.weights = j.at("weights").get<IntMatrix>();
    require_valid(spec);
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, e.what());
  }
}

// ---------------------------------------------------------------------------
// Stratification results

inline json stratum_to_json(const Stratum& s) {
  json j = {{"name", s.id()},
            {"dim", s.dim},
            {"kind", to_string(s.kind)},
            {"base_target", s.base_target},
            {"parent_contact", s.parent_contact}};
  if (s.open_dense) j["open_dense"] = true;
  return j;
}

inline json relation_to_json(const Relation<std::string>& r) {
  json out = json::array();
  for (const auto& [a, b] : r) out.push_back({a, b});
  return out;
}

inline json result_to_json(const StratificationResult& result, const IsotropyPoset& poset) {
  json contact = json::array(), cl = json::array();
  for (const auto& s : result.contact_strata) contact.push_back(stratum_to_json(s));
  for (const auto& s : result.cl_strata) cl.push_back(stratum_to_json(s));
  const auto finer = is_finer_than_contact(result);
  return {{"starred_types", result.starred_types},
          {"contact_strata", contact},
          {"contact_frontier", relation_to_json(result.contact_frontier)},
          {"cl_strata", cl},
          {"frontier", relation_to_json(result.frontier)},
          {"closure_only", relation_to_json(result.closure_only)},
          {"hasse", relation_to_json(result.hasse)},
          {"bundle_targets", bundle_targets(result, poset)},
          {"finer_than_contact", {{"refines", finer.refines}, {"strictly", finer.strictly}}},
          {"base_connected", result.base_connected},
          {"smooth_total_space", result.smooth_total_space}};
}

// ---------------------------------------------------------------------------
// DOT. An edge A -> B means A lies in the closure of B.

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

inline std::string isotropy_dot(const IsotropyPoset& poset) {
  std::ostringstream out;
  out << "digraph isotropy {\n  rankdir=BT;\n";
  auto labels = poset.labels();
  std::sort(labels.begin(), labels.end());
  for (const auto& l : labels)
    out << "  \"" << detail::dot_escape(l) << "\" [label=\"" << detail::dot_escape(l)
        << "\\ndim H=" << poset.type(l).dim_H << ", dim Q_(H)=" << poset.orbit_manifold_dim(l) << "\"];\n";
  for (const auto& [a, b] : hasse_edges(poset.order))
    out << "  \"" << detail::dot_escape(a) << "\" -> \"" << detail::dot_escape(b) << "\";\n";
  out << "}\n";
  return out.str();
}

inline std::string cl_dot(const StratificationResult& result) {
  std::ostringstream out;
  out << "digraph cl_stratification {\n  rankdir=BT;\n";
  std::vector<const Stratum*> strata;
  for (const auto& s : result.cl_strata) strata.push_back(&s);
  std::sort(strata.begin(), strata.end(), [](const Stratum* a, const Stratum* b) { return a->id() < b->id(); });
  for (const auto* s : strata)
    out << "  \"" << detail::dot_escape(s->id()) << "\" [label=\"" << detail::dot_escape(s->id()) << "\\ndim "
        << s->dim << ", " << to_string(s->kind) << "\"];\n";
  for (const auto& [a, b] : result.hasse)
    out << "  \"" << detail::dot_escape(a) << "\" -> \"" << detail::dot_escape(b) << "\";\n";
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct SampleRow {
  PhasePoint point;
  std::vector<double> momentum;
  InvariantVector invariants;
  std::string stratum;
  double residual = 0;
};

inline void write_samples_csv(std::ostream& out, int n, int k, const std::vector<SampleRow>& rows) {
  for (int i = 1; i <= 2 * n; ++i) out << "x_" << i << ",";
  for (int i = 1; i <= 2 * n; ++i) out << "u_" << i << ",";
  for (int i = 1; i <= k; ++i) out << "J_" << i << ",";
  for (int j = 1; j <= n; ++j) out << "p1_" << j << ",p2_" << j << ",p3_" << j << ",p4_" << j << ",";
  out << "stratum,residual\n";
  for (const auto& r : rows) {
    for (double v : r.point.x) out << format_double(v) << ",";
    for (double v : r.point.u) out << format_double(v) << ",";
    for (double v : r.momentum) out << format_double(v) << ",";
    for (const auto& pl : r.invariants)
      out << format_double(pl.p1) << "," << format_double(pl.p2) << "," << format_double(pl.p3) << ","
          << format_double(pl.p4) << ",";
    out << r.stratum << "," << format_double(r.residual) << "\n";
  }
}

/// Trajectory export: state, invariants, the closed-form invariant flow from
/// the start, and conservation residuals relative to the start.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto& points = traj.points();
  if (points.empty()) return;
  const int n = points.front().planes();
  const auto start = invariants(points.front());
  std::vector<double> start_image;
  for (const auto& pl : start) start_image.insert(start_image.end(), {pl.p1, pl.p2, pl.p3});

  out << "t,";
  for (int i = 1; i <= 2 * n; ++i) out << "x_" << i << ",";
  for (int i = 1; i <= 2 * n; ++i) out << "u_" << i << ",";
  for (int j = 1; j <= n; ++j) out << "p1_" << j << ",p2_" << j << ",p3_" << j << ",p4_" << j << ",";
  for (int j = 1; j <= n; ++j) out << "p1c_" << j << ",p2c_" << j << ",p3c_" << j << ",";
  out << "closed_form_residual,p4_drift,mass_drift,unit_residual\n";

  for (std::size_t s = 0; s < points.size(); ++s) {
    const auto& p = points[s];
    const auto inv = invariants(p);
    const auto closed = flow_invariants_closed(start_image, traj.times[s]);
    double closed_res = 0, p4_drift = 0, mass_drift = 0;
    for (int j = 0; j < n; ++j) {
      closed_res = std::max({closed_res, std::abs(inv[j].p1 - closed[3 * j]), std::abs(inv[j].p2 - closed[3 * j + 1]),
                             std::abs(inv[j].p3 - closed[3 * j + 2])});
      p4_drift = std::max(p4_drift, std::abs(inv[j].p4 - start[j].p4));
      mass_drift = std::max(mass_drift, std::abs((inv[j].p1 + inv[j].p3) - (start[j].p1 + start[j].p3)));
    }
    out << format_double(traj.times[s]) << ",";
    for (double v : p.x) out << format_double(v) << ",";
    for (double v : p.u) out << format_double(v) << ",";
    for (const auto& pl : inv)
      out << format_double(pl.p1) << "," << format_double(pl.p2) << "," << format_double(pl.p3) << ","
          << format_double(pl.p4) << ",";
    for (double v : closed) out << format_double(v) << ",";
    out << format_double(closed_res) << "," << format_double(p4_drift) << "," << format_double(mass_drift) << ","
        << format_double(std::abs(norm(p.u) - 1.0)) << "\n";
  }
}

}  // namespace cosred
