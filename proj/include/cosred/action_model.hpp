#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cosred/error.hpp"
#include "cosred/integer_lattice.hpp"
#include "cosred/isotropy_poset.hpp"

namespace cosred {

/// A torus T^k acting on R^{2n} = n oriented planes; plane j is rotated by
/// the character with weight vector given by column j of `weights` (k×n,
/// row-major). Planes are indexed from 0.
struct TorusActionSpec {
  int k = 0;
  int n = 0;
  IntMatrix weights;

  bool operator==(const TorusActionSpec&) const = default;
};

struct ActionLimits {
  std::int64_t max_abs_weight = 16;
  int max_planes = 16;
};

inline void require_valid(const TorusActionSpec& spec, const ActionLimits& limits = {}) {
  if (spec.k < 1) throw Error(ErrorCode::InvalidSpec, "torus dimension k must be positive");
  if (spec.n < 1) throw Error(ErrorCode::InvalidSpec, "number of planes n must be positive");
  if (spec.n > limits.max_planes)
    throw Error(ErrorCode::InvalidSpec, "n exceeds the plane cap of " + std::to_string(limits.max_planes));
  if (spec.weights.size() != static_cast<std::size_t>(spec.k))
    throw Error(ErrorCode::InvalidSpec, "weights must have k rows");
  for (const auto& row : spec.weights) {
    if (row.size() != static_cast<std::size_t>(spec.n))
      throw Error(ErrorCode::InvalidSpec, "weights must have n columns");
    for (auto w : row)
      if (std::llabs(w) > limits.max_abs_weight)
        throw Error(ErrorCode::InvalidSpec, "weight magnitude exceeds " + std::to_string(limits.max_abs_weight));
  }
  for (int j = 0; j < spec.n; ++j) {
    bool zero = true;
    for (int i = 0; i < spec.k; ++i) zero = zero && spec.weights[i][j] == 0;
    if (zero) throw Error(ErrorCode::InvalidSpec, "plane " + std::to_string(j) + " has a zero weight column");
  }
}

/// Planes as a bitmask; bit j set means plane j is in the support.
using SupportMask = std::uint32_t;

inline SupportMask mask_of(const std::vector<int>& planes) {
  SupportMask m = 0;
  for (int p : planes) m |= SupportMask{1} << p;
  return m;
}

inline std::vector<int> planes_of(SupportMask mask, int n) {
  std::vector<int> out;
  for (int j = 0; j < n; ++j)
    if (mask & (SupportMask{1} << j)) out.push_back(j);
  return out;
}

struct SupportStabilizer {
  std::vector<int> support;
  int dim_stab = 0;
  /// Nonzero Smith diagonal of the support submatrix; entries > 1 give the
  /// finite part Z/d_1 × ... of the stabilizer.
  IntVector finite_invariants;
  /// HNF of the character lattice spanned by the support columns. The
  /// stabilizer is the annihilator of this lattice, so it identifies the
  /// subgroup exactly.
  IntMatrix character_lattice;

  IntVector torsion() const {
    IntVector t;
    for (auto d : finite_invariants)
      if (d > 1) t.push_back(d);
    return t;
  }
};

inline SupportStabilizer stabilizer_of_support(const TorusActionSpec& spec, const std::vector<int>& support) {
  SupportStabilizer out;
  out.support = support;
  IntMatrix columns;
  for (int j : support) {
    if (j < 0 || j >= spec.n) throw Error(ErrorCode::InvalidArgument, "plane index out of range");
    IntVector col(spec.k);
    for (int i = 0; i < spec.k; ++i) col[i] = spec.weights[i][j];
    columns.push_back(std::move(col));
  }
  out.character_lattice = hermite_normal_form(columns);
  out.dim_stab = spec.k - static_cast<int>(out.character_lattice.size());
  out.finite_invariants = smith_diagonal(columns);
  return out;
}

enum class DimensionPolicy { Warn, Fail };

struct StabilizerClass {
  std::string label;
  IntMatrix character_lattice;
  int dim = 0;
  IntVector torsion;
  std::vector<SupportMask> supports;
};

/// A torus action together with its isotropy poset and the map from plane
/// supports to orbit-type classes.
struct TorusModel {
  TorusActionSpec spec;
  IsotropyPoset poset;
  std::vector<StabilizerClass> classes;
  std::vector<std::size_t> class_of_support;  // indexed by SupportMask
  std::vector<std::string> warnings;

  const std::string& label_of_support(SupportMask mask) const { return classes.at(class_of_support.at(mask)).label; }
};

namespace detail {

inline std::string torsion_tag(const IntVector& torsion) {
  std::string tag;
  for (auto d : torsion) {
    if (!tag.empty()) tag += "x";
    tag += "Z" + std::to_string(d);
  }
  return tag;
}

/// Readable name when the character lattice is diagonal (rows d_i·e_i):
/// factor i is e, Z_d or S1. Otherwise empty.
inline std::string diagonal_name(const IntMatrix& lattice, int k) {
  std::vector<std::string> factors(k, "S1");
  for (const auto& row : lattice) {
    int nonzero = 0;
    int col = -1;
    for (int i = 0; i < k; ++i)
      if (row[i] != 0) {
        ++nonzero;
        col = i;
      }
    if (nonzero != 1) return {};
    factors[col] = row[col] == 1 ? "e" : "Z" + std::to_string(row[col]);
  }
  bool all_e = true, all_s1 = true;
  for (const auto& f : factors) {
    all_e = all_e && f == "e";
    all_s1 = all_s1 && f == "S1";
  }
  if (all_e) return "e";
  if (all_s1) return k == 1 ? "S1" : "T" + std::to_string(k);
  std::string name;
  for (const auto& f : factors) name += (name.empty() ? "" : "x") + f;
  return name;
}

/// Connected components of one orbit-type set, where cells S and S' touch
/// when one support contains the other. Returns the top cell dimension of
/// each component.
inline std::vector<int> orbit_type_component_dims(const std::vector<SupportMask>& cells) {
  std::vector<int> parent(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i + 1; j < cells.size(); ++j)
      if ((cells[i] & cells[j]) == cells[i] || (cells[i] & cells[j]) == cells[j]) parent[find(i)] = find(j);
  std::map<int, int> top;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    int dim = 2 * __builtin_popcount(cells[i]);
    int& slot = top[find(static_cast<int>(i))];
    slot = std::max(slot, dim);
  }
  std::vector<int> out;
  for (const auto& [_, d] : top) out.push_back(d);
  return out;
}

}  // namespace detail

inline TorusModel build_torus_model(const TorusActionSpec& spec, DimensionPolicy policy = DimensionPolicy::Warn,
                                    const ActionLimits& limits = {}) {
  require_valid(spec, limits);
  TorusModel model;
  model.spec = spec;
  const SupportMask count = SupportMask{1} << spec.n;
  model.class_of_support.resize(count);

  std::map<IntMatrix, std::size_t> index_of;
  for (SupportMask mask = 0; mask < count; ++mask) {
    auto stab = stabilizer_of_support(spec, planes_of(mask, spec.n));
    auto [it, inserted] = index_of.try_emplace(stab.character_lattice, model.classes.size());
    if (inserted) {
      StabilizerClass cls;
      cls.character_lattice = stab.character_lattice;
      cls.dim = stab.dim_stab;
      cls.torsion = stab.torsion();
      model.classes.push_back(std::move(cls));
    }
    model.classes[it->second].supports.push_back(mask);
    model.class_of_support[mask] = it->second;
  }

  int generic = 0;
  for (auto& cls : model.classes) {
    cls.label = detail::diagonal_name(cls.character_lattice, spec.k);
    if (cls.label.empty()) cls.label = "K" + std::to_string(++generic);
  }

  IsotropyPoset& poset = model.poset;
  poset.dim_G = spec.k;
  poset.dim_Q = 2 * spec.n;
  for (const auto& cls : model.classes) {
    OrbitType t;
    t.label = cls.label;
    t.dim_H = cls.dim;
    t.is_identity = cls.dim == 0 && cls.torsion.empty();
    if (!cls.torsion.empty()) t.finite_tag = detail::torsion_tag(cls.torsion);
    poset.types.push_back(t);

    auto dims = detail::orbit_type_component_dims(cls.supports);
    int top = *std::max_element(dims.begin(), dims.end());
    poset.dim_Q_of[cls.label] = top;
    if (*std::min_element(dims.begin(), dims.end()) != top) {
      std::string msg = "orbit type '" + cls.label + "' has components of differing dimension";
      if (policy == DimensionPolicy::Fail) throw Error(ErrorCode::EqualDimensionAssumptionViolated, msg);
      model.warnings.push_back(msg);
    }
  }
  // (L) ≺ (H) iff H_L ⊊ H_H iff the character lattice of H is strictly inside that of L.
  for (const auto& lo : model.classes)
    for (const auto& hi : model.classes)
      if (lo.label != hi.label && lattice_subset(hi.character_lattice, lo.character_lattice))
        poset.order.emplace(lo.label, hi.label);

  std::sort(poset.types.begin(), poset.types.end(), [](const OrbitType& a, const OrbitType& b) {
    return std::tie(a.dim_H, a.label) < std::tie(b.dim_H, b.label);
  });
  return model;
}

inline IsotropyPoset build_isotropy_poset(const TorusActionSpec& spec, DimensionPolicy policy = DimensionPolicy::Warn) {
  return build_torus_model(spec, policy).poset;
}

struct SemifreeDiagnosis {
  bool value = false;
  /// 'a', 'b' or 'c' for the first failing condition, 0 when all hold.
  char first_failure = 0;
  std::vector<std::string> diagnostics;
};

/// Almost-semifree test on an isotropy poset of an abelian action:
/// (a) principal stabilizer trivial; (b) each type with non-maximal orbit
/// dimension has an orbit-type manifold that is a union of orbits,
/// dim Q_(H) = dim G − dim H; (c) each nontrivial stabilizer has the full
/// Lie algebra, since the adjoint action on g/h is trivial.
inline SemifreeDiagnosis is_almost_semifree(const IsotropyPoset& poset) {
  require_valid(poset);
  SemifreeDiagnosis out;
  auto record = [&](char cond, std::string msg) {
    if (!out.first_failure) out.first_failure = cond;
    out.diagnostics.push_back(std::string("(") + cond + ") " + msg);
  };
  const OrbitType& principal = principal_type(poset);
  if (!principal.is_identity) record('a', "principal stabilizer '" + principal.label + "' is not trivial");

  for (const auto& t : poset.types) {
    if (t.label == principal.label) continue;
    if (t.dim_H > principal.dim_H && poset.orbit_manifold_dim(t.label) != poset.dim_G - t.dim_H)
      record('b', "orbit-type manifold of '" + t.label + "' has dimension " +
                      std::to_string(poset.orbit_manifold_dim(t.label)) + " > dim G - dim H = " +
                      std::to_string(poset.dim_G - t.dim_H));
  }
  for (const auto& t : poset.types) {
    if (t.is_identity) continue;
    if (t.dim_H != poset.dim_G)
      record('c', "stabilizer '" + t.label + "' has dimension " + std::to_string(t.dim_H) + " < dim G = " +
                      std::to_string(poset.dim_G) + "; adjoint action on g/h is not free");
  }
  std::sort(out.diagnostics.begin(), out.diagnostics.end());
  out.value = out.first_failure == 0;
  return out;
}

inline SemifreeDiagnosis is_almost_semifree(const TorusActionSpec& spec) {
  return is_almost_semifree(build_isotropy_poset(spec));
}

inline bool lifted_action_is_free(const TorusActionSpec& spec) { return is_almost_semifree(spec).value; }

/// S^1 rotating R^2.
inline TorusActionSpec circle_on_plane() { return {1, 1, {{1}}}; }

/// T^2 acting on R^2 × R^2, each factor rotating its own plane.
inline TorusActionSpec torus_on_two_planes() { return {2, 2, {{1, 0}, {0, 1}}}; }

}  // namespace cosred
