#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cosred/error.hpp"

namespace cosred {

using IntVector = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVector>;  // row-major

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline void axpy_row(IntVector& target, const IntVector& source, std::int64_t factor) {
  for (std::size_t i = 0; i < target.size(); ++i) target[i] -= factor * source[i];
}

}  // namespace detail

/// Row-style Hermite normal form of the lattice generated by `rows`.
/// Zero rows are dropped; pivots are positive and entries above each pivot
/// lie in [0, pivot). Two generating sets span the same lattice iff their
/// HNFs are equal.
inline IntMatrix hermite_normal_form(IntMatrix rows) {
  if (rows.empty()) return {};
  const std::size_t width = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != width) throw Error(ErrorCode::InvalidArgument, "ragged integer matrix");

  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < width && pivot_row < rows.size(); ++col) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t r = pivot_row; r < rows.size(); ++r)
        if (rows[r][col] != 0 && (best == rows.size() || std::llabs(rows[r][col]) < std::llabs(rows[best][col])))
          best = r;
      if (best == rows.size()) break;
      std::swap(rows[pivot_row], rows[best]);
      bool clean = true;
      for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        detail::axpy_row(rows[r], rows[pivot_row], rows[r][col] / rows[pivot_row][col]);
        if (rows[r][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (rows[pivot_row][col] == 0) continue;
    if (rows[pivot_row][col] < 0)
      for (auto& v : rows[pivot_row]) v = -v;
    for (std::size_t r = 0; r < pivot_row; ++r)
      detail::axpy_row(rows[r], rows[pivot_row], detail::floor_div(rows[r][col], rows[pivot_row][col]));
    ++pivot_row;
  }
  rows.resize(pivot_row);
  return rows;
}

/// Reduces `v` against an HNF basis; the result is zero iff v lies in the lattice.
inline IntVector reduce_modulo(IntVector v, const IntMatrix& hnf) {
  for (const auto& row : hnf) {
    auto pivot = std::find_if(row.begin(), row.end(), [](std::int64_t x) { return x != 0; });
    const auto col = static_cast<std::size_t>(pivot - row.begin());
    if (v[col] % *pivot != 0) return v;
    detail::axpy_row(v, row, v[col] / *pivot);
  }
  return v;
}

inline bool lattice_contains(const IntMatrix& hnf, const IntVector& v) {
  auto rem = reduce_modulo(v, hnf);
  return std::all_of(rem.begin(), rem.end(), [](std::int64_t x) { return x == 0; });
}

/// True iff the lattice spanned by `inner` is a subset of the one spanned by `outer`.
inline bool lattice_subset(const IntMatrix& inner, const IntMatrix& outer) {
  return std::all_of(inner.begin(), inner.end(),
                     [&](const IntVector& v) { return lattice_contains(outer, v); });
}

/// Nonzero Smith normal form diagonal d_1 | d_2 | ... | d_r (all positive).
inline IntVector smith_diagonal(IntMatrix m) {
  IntVector diag;
  if (m.empty()) return diag;
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (m[i][j] != 0 && (pr == rows || std::llabs(m[i][j]) < std::llabs(m[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == rows) {
        std::sort(diag.begin(), diag.end());
        return diag;
      }
      std::swap(m[t], m[pr]);
      for (auto& row : m) std::swap(row[t], row[pc]);

      bool reduced = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        std::int64_t q = m[i][t] / m[t][t];
        if (q != 0) detail::axpy_row(m[i], m[t], q);
        if (m[i][t] != 0) reduced = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        std::int64_t q = m[t][j] / m[t][t];
        if (q != 0)
          for (std::size_t i = 0; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) reduced = false;
      }
      if (!reduced) continue;

      // Enforce divisibility of the trailing block by the pivot.
      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (m[i][j] % m[t][t] != 0) {
            for (std::size_t c = 0; c < cols; ++c) m[t][c] += m[i][c];
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    diag.push_back(std::llabs(m[t][t]));
  }
  std::sort(diag.begin(), diag.end());
  return diag;
}

inline std::size_t integer_rank(const IntMatrix& rows) { return hermite_normal_form(rows).size(); }

inline IntMatrix transpose(const IntMatrix& m) {
  if (m.empty()) return {};
  IntMatrix t(m.front().size(), IntVector(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

}  // namespace cosred
