#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cosred/error.hpp"

namespace cosred {

/// A binary relation stored as ordered pairs (a, b), read "a precedes b".
template <typename T>
using Relation = std::set<std::pair<T, T>>;

template <typename T>
std::set<T> relation_nodes(const Relation<T>& relation) {
  std::set<T> nodes;
  for (const auto& [a, b] : relation) {
    nodes.insert(a);
    nodes.insert(b);
  }
  return nodes;
}

template <typename T>
Relation<T> transitive_closure(const Relation<T>& relation) {
  std::map<T, std::set<T>> succ;
  for (const auto& [a, b] : relation) succ[a].insert(b);

  // Depth-first reachability from every source node.
  Relation<T> closure;
  for (const auto& [source, direct] : succ) {
    std::set<T> seen;
    std::vector<T> stack(direct.begin(), direct.end());
    while (!stack.empty()) {
      T node = stack.back();
      stack.pop_back();
      if (!seen.insert(node).second) continue;
      if (auto it = succ.find(node); it != succ.end())
        for (const auto& next : it->second) stack.push_back(next);
    }
    for (const auto& target : seen) closure.emplace(source, target);
  }
  return closure;
}

template <typename T>
bool is_acyclic(const Relation<T>& relation) {
  const auto closure = transitive_closure(relation);
  return std::none_of(closure.begin(), closure.end(),
                      [](const auto& pair) { return pair.first == pair.second; });
}

/// Transitive reduction (Hasse diagram) of a strict partial order. The input
/// need not be transitively closed; only acyclicity is required.
template <typename T>
Relation<T> hasse_edges(const Relation<T>& relation) {
  const auto closure = transitive_closure(relation);
  std::map<T, std::set<T>> above;
  for (const auto& [a, b] : closure) {
    if (a == b) throw Error(ErrorCode::CyclicRelation, "relation contains a cycle");
    above[a].insert(b);
  }
  Relation<T> reduced;
  for (const auto& [a, targets] : above) {
    for (const auto& b : targets) {
      bool covered = false;
      for (const auto& mid : targets) {
        if (mid == b) continue;
        auto it = above.find(mid);
        if (it != above.end() && it->second.count(b)) {
          covered = true;
          break;
        }
      }
      if (!covered) reduced.emplace(a, b);
    }
  }
  return reduced;
}

struct OrbitType {
  std::string label;
  int dim_H = 0;
  bool is_identity = false;
  std::optional<std::string> finite_tag;

  bool operator==(const OrbitType&) const = default;
};

/// The isotropy lattice of a proper action together with the dimensions of
/// the orbit-type manifolds. `order` holds strict subconjugation pairs
/// (L, H) meaning (L) ≺ (H).
struct IsotropyPoset {
  std::vector<OrbitType> types;
  Relation<std::string> order;
  std::map<std::string, int> dim_Q_of;
  int dim_G = 0;
  int dim_Q = 0;

  bool contains(const std::string& label) const {
    return std::any_of(types.begin(), types.end(),
                       [&](const OrbitType& t) { return t.label == label; });
  }

  const OrbitType& type(const std::string& label) const {
    for (const auto& t : types)
      if (t.label == label) return t;
    throw Error(ErrorCode::UnknownLabel, "no orbit type '" + label + "'");
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(types.size());
    for (const auto& t : types) out.push_back(t.label);
    return out;
  }

  int orbit_manifold_dim(const std::string& label) const {
    type(label);
    auto it = dim_Q_of.find(label);
    if (it == dim_Q_of.end())
      throw Error(ErrorCode::InvalidPoset, "missing dim_Q_of for '" + label + "'");
    return it->second;
  }

  /// Dimension of the orbit-type stratum Q^(H) = Q_(H)/G of the quotient.
  int quotient_dim(const std::string& label) const {
    return orbit_manifold_dim(label) - dim_G + type(label).dim_H;
  }

  bool operator==(const IsotropyPoset&) const = default;
};

struct ValidationOptions {
  std::size_t max_types = 64;
};

struct ValidationReport {
  std::vector<std::string> violations;
  // Recorded, not checked: abstract input cannot see connected components.
  std::vector<std::string> assumptions;

  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate(const IsotropyPoset& poset, const ValidationOptions& options = {}) {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  report.assumptions.push_back(
      "all connected components of each orbit-type manifold share one dimension");

  if (poset.dim_G < 0) fail("dim_G is negative");
  if (poset.dim_Q < 0) fail("dim_Q is negative");
  if (poset.types.empty()) fail("poset has no orbit types");
  if (poset.types.size() > options.max_types)
    fail("poset has " + std::to_string(poset.types.size()) + " types, cap is " +
         std::to_string(options.max_types));

  std::set<std::string> labels;
  int identities = 0;
  for (const auto& t : poset.types) {
    if (!labels.insert(t.label).second) fail("duplicate label '" + t.label + "'");
    if (t.dim_H < 0) fail("negative dim_H for '" + t.label + "'");
    if (t.dim_H > poset.dim_G) fail("dim_H exceeds dim_G for '" + t.label + "'");
    if (t.is_identity) {
      ++identities;
      if (t.dim_H != 0 || t.finite_tag) fail("identity type '" + t.label + "' is not trivial");
    }
    auto it = poset.dim_Q_of.find(t.label);
    if (it == poset.dim_Q_of.end()) {
      fail("missing dim_Q_of for '" + t.label + "'");
      continue;
    }
    if (it->second < 0) fail("negative dim_Q_of for '" + t.label + "'");
    if (it->second > poset.dim_Q) fail("dim_Q_of exceeds dim_Q for '" + t.label + "'");
    if (it->second < poset.dim_G - t.dim_H)
      fail("orbits of '" + t.label + "' do not fit in their orbit-type manifold");
  }
  if (identities > 1) fail("more than one identity type");
  for (const auto& [label, _] : poset.dim_Q_of)
    if (!labels.count(label)) fail("dim_Q_of names unknown label '" + label + "'");

  bool endpoints_known = true;
  for (const auto& [a, b] : poset.order) {
    if (!labels.count(a) || !labels.count(b)) {
      fail("order pair (" + a + ", " + b + ") names an unknown label");
      endpoints_known = false;
      continue;
    }
    if (a == b) {
      fail("irreflexivity violated at '" + a + "'");
      continue;
    }
    if (poset.order.count({b, a})) fail("antisymmetry violated by '" + a + "' and '" + b + "'");
    const auto& lo = poset.type(a);
    const auto& hi = poset.type(b);
    if (lo.dim_H > hi.dim_H)
      fail("'" + a + "' precedes '" + b + "' but has larger dimension");
    else if (lo.dim_H == hi.dim_H && lo.finite_tag == hi.finite_tag)
      fail("'" + a + "' precedes '" + b + "' with equal dimension and finite tag");
  }
  if (endpoints_known) {
    for (const auto& [a, b] : poset.order)
      for (const auto& [c, d] : poset.order)
        if (b == c && a != d && !poset.order.count({a, d}))
          fail("transitivity violated: (" + a + ", " + b + ") and (" + c + ", " + d + ")");
  }
  return report;
}

inline void require_valid(const IsotropyPoset& poset) {
  auto report = validate(poset);
  if (!report.ok()) throw Error(ErrorCode::InvalidPoset, report.violations.front());
}

inline bool is_subconjugate(const std::string& a, const std::string& b, const IsotropyPoset& poset) {
  if (!poset.contains(a)) throw Error(ErrorCode::UnknownLabel, "no orbit type '" + a + "'");
  if (!poset.contains(b)) throw Error(ErrorCode::UnknownLabel, "no orbit type '" + b + "'");
  return poset.order.count({a, b}) > 0;
}

/// The unique minimal orbit type. In a finite poset a unique minimal element
/// is automatically the minimum.
inline const OrbitType& principal_type(const IsotropyPoset& poset) {
  const OrbitType* found = nullptr;
  int minimal = 0;
  for (const auto& t : poset.types) {
    bool has_below = std::any_of(poset.order.begin(), poset.order.end(),
                                 [&](const auto& p) { return p.second == t.label; });
    if (!has_below) {
      ++minimal;
      found = &t;
    }
  }
  if (minimal != 1)
    throw Error(ErrorCode::NoUniqueMinimum,
                std::to_string(minimal) + " minimal orbit types (Q/G disconnected or invalid input)");
  return *found;
}

}  // namespace cosred
