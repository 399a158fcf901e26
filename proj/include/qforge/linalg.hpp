// Exact dense linear algebra: Bareiss fraction-free elimination over
// Z[v, v^-1] and Gaussian elimination over Q(v).
#pragma once

#include "qforge/ratfun.hpp"

#include <vector>

namespace qforge {

using LaurentMatrix = std::vector<std::vector<LaurentPoly>>;
using RatMatrix = std::vector<std::vector<RatFun>>;
using RatVector = std::vector<RatFun>;

// Rank via Bareiss one-step fraction-free elimination with full pivoting.
// All divisions are exact in Z[v, v^-1].
inline int bareiss_rank(LaurentMatrix m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  LaurentPoly prev(1);
  int r = 0;
  for (; r < rows && r < cols; ++r) {
    int pi = -1, pj = -1;
    for (int i = r; i < rows && pi < 0; ++i)
      for (int j = r; j < cols; ++j)
        if (!m[i][j].is_zero()) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    std::swap(m[r], m[pi]);
    if (pj != r)
      for (int i = 0; i < rows; ++i) std::swap(m[i][r], m[i][pj]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = r + 1; j < cols; ++j)
        m[i][j] = exact_div(m[r][r] * m[i][j] - m[i][r] * m[r][j], prev);
      m[i][r] = LaurentPoly();
    }
    prev = m[r][r];
  }
  return r;
}

// Clears denominators row by row, then Bareiss.
inline int rank(const RatMatrix& m) {
  LaurentMatrix cleared;
  cleared.reserve(m.size());
  for (auto& row : m) {
    LaurentPoly lcd(1);
    for (auto& x : row)
      if (!x.is_zero()) lcd = exact_div(lcd * x.den(), laurent_gcd(lcd, x.den()));
    std::vector<LaurentPoly> out;
    out.reserve(row.size());
    for (auto& x : row) {
      if (x.is_zero())
        out.emplace_back();
      else
        out.push_back(x.num() * exact_div(lcd, x.den()));
    }
    cleared.push_back(std::move(out));
  }
  return bareiss_rank(std::move(cleared));
}

// Row echelon form over Q(v).  Rows are reduced in place; pivots normalized
// to 1 and their columns cleared above and below.
struct Echelon {
  RatMatrix rows;            // reduced rows, zero rows dropped
  std::vector<int> pivots;   // pivot column per reduced row, increasing
  int rank() const { return static_cast<int>(pivots.size()); }
  bool is_pivot(int col) const {
    for (int p : pivots)
      if (p == col) return true;
    return false;
  }
};

inline Echelon echelon(RatMatrix m) {
  Echelon e;
  const int cols = m.empty() ? 0 : static_cast<int>(m[0].size());
  int next = 0;
  for (int col = 0; col < cols; ++col) {
    int piv = -1;
    for (int i = next; i < static_cast<int>(m.size()); ++i)
      if (!m[i][col].is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[next], m[piv]);
    RatFun inv = RatFun(1) / m[next][col];
    for (int j = col; j < cols; ++j) m[next][j] *= inv;
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
      if (i == next || m[i][col].is_zero()) continue;
      RatFun f = m[i][col];
      for (int j = col; j < cols; ++j) m[i][j] -= f * m[next][j];
    }
    e.pivots.push_back(col);
    ++next;
  }
  m.resize(next);
  e.rows = std::move(m);
  return e;
}

// Reduce a vector modulo the row space of an echelon form; the result has
// zero entries in all pivot columns.
inline RatVector reduce_mod(const Echelon& e, RatVector x) {
  for (std::size_t r = 0; r < e.rows.size(); ++r) {
    const int p = e.pivots[r];
    if (x[p].is_zero()) continue;
    RatFun f = x[p];
    for (std::size_t j = 0; j < x.size(); ++j) x[j] -= f * e.rows[r][j];
  }
  return x;
}

// Solve A x = b for square nonsingular A over Q(v).
inline RatVector solve(RatMatrix a, RatVector b) {
  const int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i) a[i].push_back(b[i]);
  Echelon e = echelon(std::move(a));
  if (e.rank() != n) throw std::runtime_error("solve: singular system");
  RatVector x(n);
  for (int i = 0; i < n; ++i) {
    if (e.pivots[i] != i) throw std::runtime_error("solve: singular system");
    x[i] = e.rows[i][n];
  }
  return x;
}

// Multiply matrix by vector.
inline RatVector mat_apply(const RatMatrix& a, const RatVector& x) {
  RatVector y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!a[i][j].is_zero() && !x[j].is_zero()) y[i] += a[i][j] * x[j];
  return y;
}

inline RatVector bar(const RatVector& x) {
  RatVector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i].bar();
  return y;
}

inline bool is_zero(const RatVector& x) {
  for (auto& c : x)
    if (!c.is_zero()) return false;
  return true;
}

} // namespace qforge
