#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cosred/action_model.hpp"
#include "cosred/error.hpp"
#include "cosred/isotropy_poset.hpp"

namespace cosred {

enum class StratumKind { ContactStratum, CosphereLike, CoisotropicSeam, LegendrianSeam };

constexpr const char* to_string(StratumKind kind) {
  switch (kind) {
    case StratumKind::ContactStratum: return "contact";
    case StratumKind::CosphereLike: return "cosphere-like";
    case StratumKind::CoisotropicSeam: return "coisotropic-seam";
    case StratumKind::LegendrianSeam: return "legendrian-seam";
  }
  return "unknown";
}

enum class Piece { Contact, CC, Seam };

/// Contact(L), CC(L) or Seam(H ≻ L). For the first two `upper == lower == L`.
struct StratumName {
  Piece piece = Piece::CC;
  std::string upper;
  std::string lower;

  static StratumName contact(const std::string& l) { return {Piece::Contact, l, l}; }
  static StratumName cc(const std::string& l) { return {Piece::CC, l, l}; }
  static StratumName seam(const std::string& h, const std::string& l) { return {Piece::Seam, h, l}; }

  std::string str() const {
    switch (piece) {
      case Piece::Contact: return "Contact(" + lower + ")";
      case Piece::CC: return "CC(" + lower + ")";
      case Piece::Seam: return "Seam(" + upper + ">" + lower + ")";
    }
    return {};
  }

  auto operator<=>(const StratumName&) const = default;
};

struct Stratum {
  StratumName name;
  int dim = 0;
  StratumKind kind = StratumKind::CosphereLike;
  std::string base_target;     // orbit type of Q/G the stratum maps onto
  std::string parent_contact;  // (L) of the enclosing contact stratum
  bool open_dense = false;

  std::string id() const { return name.str(); }
};

struct StratOptions {
  bool base_connected = true;
};

/// Frontier relations hold pairs (A, B) meaning A ⊆ ∂B, i.e. A → B in a
/// stratification lattice.
struct StratificationResult {
  std::vector<std::string> starred_types;
  std::vector<Stratum> contact_strata;
  Relation<std::string> contact_frontier;
  std::vector<Stratum> cl_strata;
  Relation<std::string> generators;    // pairs produced directly by the frontier rules
  Relation<std::string> frontier;      // transitive closure of `generators`
  Relation<std::string> closure_only;  // frontier pairs no rule lists directly
  Relation<std::string> hasse;
  bool base_connected = true;
  bool smooth_total_space = false;

  const Stratum& stratum(const std::string& id) const {
    for (const auto& s : cl_strata)
      if (s.id() == id) return s;
    for (const auto& s : contact_strata)
      if (s.id() == id) return s;
    throw Error(ErrorCode::UnknownLabel, "no stratum '" + id + "'");
  }
};

/// Types whose quotient stratum Q^(H) has positive dimension.
inline std::vector<std::string> starred_lattice(const IsotropyPoset& poset) {
  require_valid(poset);
  std::vector<std::string> out;
  for (const auto& t : poset.types)
    if (poset.quotient_dim(t.label) >= 1) out.push_back(t.label);
  return out;
}

/// Orbit types occurring in the zero level set of the contact momentum map.
inline std::vector<std::string> zero_level_types(const IsotropyPoset& poset) { return starred_lattice(poset); }

namespace detail {

inline bool is_starred(const IsotropyPoset& poset, const std::string& label) {
  return poset.quotient_dim(label) >= 1;
}

inline int cosphere_dim(int base_dim) { return 2 * base_dim - 1; }

inline int seam_dim(const IsotropyPoset& poset, const std::string& h, const std::string& l) {
  return poset.orbit_manifold_dim(h) + poset.orbit_manifold_dim(l) - 2 * poset.dim_G + poset.type(h).dim_H +
         poset.type(l).dim_H - 1;
}

inline std::optional<std::string> connected_principal(const IsotropyPoset& poset, bool connected) {
  if (!connected) return std::nullopt;
  try {
    return principal_type(poset).label;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace detail

inline std::vector<Stratum> contact_strata(const IsotropyPoset& poset) {
  std::vector<Stratum> out;
  for (const auto& l : starred_lattice(poset)) {
    Stratum s;
    s.name = StratumName::contact(l);
    s.dim = detail::cosphere_dim(poset.quotient_dim(l));
    s.kind = StratumKind::ContactStratum;
    s.base_target = l;
    s.parent_contact = l;
    out.push_back(std::move(s));
  }
  return out;
}

/// Contact(K) ⊆ ∂Contact(H) iff (H) ≺ (K).
inline Relation<std::string> contact_frontier(const IsotropyPoset& poset) {
  const auto starred = starred_lattice(poset);
  Relation<std::string> out;
  for (const auto& h : starred)
    for (const auto& k : starred)
      if (poset.order.count({h, k})) out.emplace(StratumName::contact(k).str(), StratumName::contact(h).str());
  return out;
}

/// Secondary stratification of Contact(L): the cosphere-like piece CC(L)
/// and one seam per (H) ≻ (L).
inline std::vector<Stratum> secondary_strata(const IsotropyPoset& poset, const std::string& l) {
  require_valid(poset);
  if (!detail::is_starred(poset, l))
    throw Error(ErrorCode::NotStarredType, "'" + l + "' has a zero-dimensional quotient stratum");

  std::vector<Stratum> out;
  Stratum cc;
  cc.name = StratumName::cc(l);
  cc.dim = detail::cosphere_dim(poset.quotient_dim(l));
  cc.kind = StratumKind::CosphereLike;
  cc.base_target = l;
  cc.parent_contact = l;
  cc.open_dense = true;  // open and dense inside Contact(L)
  out.push_back(cc);

  for (const auto& t : poset.types) {
    if (!poset.order.count({l, t.label})) continue;
    Stratum seam;
    seam.name = StratumName::seam(t.label, l);
    seam.dim = detail::seam_dim(poset, t.label, l);
    seam.kind = detail::is_starred(poset, t.label) ? StratumKind::CoisotropicSeam : StratumKind::LegendrianSeam;
    seam.base_target = t.label;
    seam.parent_contact = l;
    out.push_back(std::move(seam));
  }
  return out;
}

/// Coisotropic when (H) ∈ I*_Q, Legendrian otherwise. Cross-checks the
/// dimension identity dim Seam − (dim Contact(L) − 1)/2 = dim Q^(H).
inline StratumKind classify_seam(const IsotropyPoset& poset, const std::string& h, const std::string& l) {
  require_valid(poset);
  if (!detail::is_starred(poset, l) || !poset.order.count({l, h}))
    throw Error(ErrorCode::NoSuchSeam, "no seam " + StratumName::seam(h, l).str());

  const int seam = detail::seam_dim(poset, h, l);
  const int contact = detail::cosphere_dim(poset.quotient_dim(l));
  const int excess = seam - (contact - 1) / 2;
  const bool legendrian = !detail::is_starred(poset, h);
  if (seam < 0 || excess < 0 || excess != poset.quotient_dim(h) || (excess == 0) != legendrian)
    throw Error(ErrorCode::InconsistentDimensions, "dimension identity fails for " + StratumName::seam(h, l).str());
  return legendrian ? StratumKind::LegendrianSeam : StratumKind::CoisotropicSeam;
}

/// Frontier generators (A ⊆ ∂B) for the C-L pieces.
inline Relation<std::string> cl_frontier_generators(const IsotropyPoset& poset) {
  const auto starred = starred_lattice(poset);
  const std::set<std::string> starred_set(starred.begin(), starred.end());
  const auto labels = poset.labels();
  auto below = [&](const std::string& a, const std::string& b) { return poset.order.count({a, b}) > 0; };
  auto cc = [](const std::string& l) { return StratumName::cc(l).str(); };
  auto seam = [](const std::string& h, const std::string& l) { return StratumName::seam(h, l).str(); };

  Relation<std::string> out;
  for (const auto& h : starred) {
    for (const auto& k : labels) {
      if (!below(h, k)) continue;
      // (i) CC(K) ⊆ ∂CC(H)  and  (iii) CC(K) ⊆ ∂Seam(K≻H)
      if (starred_set.count(k)) {
        out.emplace(cc(k), cc(h));
        out.emplace(cc(k), seam(k, h));
      }
      // (ii) Seam(K≻H) ⊆ ∂CC(H)
      out.emplace(seam(k, h), cc(h));
      // (iv) Seam(K'≻H) ⊆ ∂Seam(K≻H) for (H) ≺ (K) ≺ (K')
      for (const auto& k2 : labels)
        if (below(k, k2)) out.emplace(seam(k2, h), seam(k, h));
      // (v) Seam(K≻H') ⊆ ∂Seam(K≻H) for (H) ≺ (H') ≺ (K)
      for (const auto& h2 : starred)
        if (below(h, h2) && below(h2, k)) out.emplace(seam(k, h2), seam(k, h));
    }
  }
  return out;
}

inline StratificationResult cl_stratification(const IsotropyPoset& poset, const StratOptions& options = {}) {
  require_valid(poset);
  StratificationResult result;
  result.base_connected = options.base_connected;
  result.starred_types = starred_lattice(poset);
  result.contact_strata = contact_strata(poset);
  result.contact_frontier = contact_frontier(poset);

  const auto principal = detail::connected_principal(poset, options.base_connected);
  for (const auto& l : result.starred_types) {
    for (auto& s : secondary_strata(poset, l)) {
      s.open_dense = s.name.piece == Piece::CC && principal && *principal == l;
      if (s.name.piece == Piece::Seam) s.kind = classify_seam(poset, s.name.upper, l);
      result.cl_strata.push_back(std::move(s));
    }
  }
  for (auto& c : result.contact_strata) c.open_dense = principal && *principal == c.name.lower;

  result.generators = cl_frontier_generators(poset);
  result.frontier = transitive_closure(result.generators);
  for (const auto& pair : result.frontier)
    if (!result.generators.count(pair)) result.closure_only.insert(pair);
  result.hasse = hasse_edges(result.frontier);
  return result;
}

struct FinerReport {
  bool refines = false;
  bool strictly = false;
};

/// Every C-L piece lies in exactly one contact stratum and each contact
/// stratum has exactly one CC piece; strict when there are more pieces.
inline FinerReport is_finer_than_contact(const StratificationResult& result) {
  FinerReport out;
  std::map<std::string, int> cc_children;
  for (const auto& c : result.contact_strata) cc_children[c.name.lower] = 0;
  out.refines = true;
  for (const auto& s : result.cl_strata) {
    auto it = cc_children.find(s.parent_contact);
    if (it == cc_children.end()) {
      out.refines = false;
      continue;
    }
    if (s.name.piece == Piece::CC) ++it->second;
  }
  for (const auto& [_, count] : cc_children) out.refines = out.refines && count == 1;
  out.strictly = out.refines && result.cl_strata.size() > result.contact_strata.size();
  return out;
}

/// Orbit-type stratum of Q/G onto which each C-L piece projects.
inline std::map<std::string, std::string> bundle_targets(const StratificationResult& result,
                                                         const IsotropyPoset& poset) {
  std::map<std::string, std::string> out;
  for (const auto& s : result.cl_strata) {
    const std::string expected = s.name.piece == Piece::Seam ? s.name.upper : s.name.lower;
    if (s.base_target != expected || !poset.contains(s.base_target))
      throw Error(ErrorCode::InvalidArgument, s.id() + " does not target a single orbit-type stratum");
    out.emplace(s.id(), s.base_target);
  }
  return out;
}

/// Almost semifree base action: C_0 is smooth, made of CC(e) and one
/// Legendrian seam per singular orbit type.
inline StratificationResult semifree_decomposition(const IsotropyPoset& poset) {
  auto diagnosis = is_almost_semifree(poset);
  if (!diagnosis.value)
    throw Error(ErrorCode::NotAlmostSemifree,
                diagnosis.diagnostics.empty() ? std::string("condition failed") : diagnosis.diagnostics.front());
  auto result = cl_stratification(poset);
  const int reduced = poset.dim_Q - poset.dim_G;
  for (const auto& s : result.cl_strata) {
    bool ok = s.name.piece == Piece::CC ? s.dim == 2 * reduced - 1
                                        : s.kind == StratumKind::LegendrianSeam && s.dim == reduced - 1;
    if (!ok) throw Error(ErrorCode::InconsistentDimensions, s.id() + " breaks the semifree dimension count");
  }
  if (result.contact_strata.size() > 1)
    throw Error(ErrorCode::InconsistentDimensions, "almost semifree action with several contact strata");
  result.smooth_total_space = true;
  return result;
}

inline StratificationResult semifree_decomposition(const TorusActionSpec& spec) {
  return semifree_decomposition(build_isotropy_poset(spec));
}

/// Single orbit type: C_0 is the cosphere bundle of Q/G. Empty when Q/G is
/// a point, since the cosphere bundle of a point is empty.
inline std::optional<Stratum> single_type_reduce(const IsotropyPoset& poset) {
  require_valid(poset);
  if (poset.types.size() != 1)
    throw Error(ErrorCode::MultipleOrbitTypes, std::to_string(poset.types.size()) + " orbit types");
  const auto& t = poset.types.front();
  const int base = poset.quotient_dim(t.label);
  if (base == 0) return std::nullopt;
  Stratum s;
  s.name = StratumName::cc(t.label);
  s.dim = detail::cosphere_dim(base);
  s.kind = StratumKind::CosphereLike;
  s.base_target = t.label;
  s.parent_contact = t.label;
  s.open_dense = true;
  return s;
}

}  // namespace cosred
