#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "extconvex/scalar.hpp"

namespace extconvex {

/// Minimal dense matrix over the exact rationals; used only for the exact
/// arithmetic mode (problem sizes here are tiny).
struct RationalMatrix {
  int rows = 0, cols = 0;
  std::vector<Rational> a;

  RationalMatrix() = default;
  RationalMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, Rational(0)) {}

  Rational& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Rational& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

namespace exact {

/// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<int> rref(RationalMatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int p = -1;
    for (int i = row; i < m.rows; ++i)
      if (m.at(i, col) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(row, j));
    const Rational inv_pivot = Rational(1) / m.at(row, col);
    for (int j = col; j < m.cols; ++j) m.at(row, j) *= inv_pivot;
    for (int i = 0; i < m.rows; ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      const Rational f = m.at(i, col);
      for (int j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline int rank(RationalMatrix m) { return static_cast<int>(rref(m).size()); }

/// Basis of the kernel of m (as columns of the returned matrix).
inline std::vector<std::vector<Rational>> kernel(RationalMatrix m) {
  const int nc = m.cols;
  const std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(nc, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < nc; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(nc, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(static_cast<int>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves m x = b exactly; nullopt when the system is inconsistent.
/// Free variables are set to zero.
inline std::optional<std::vector<Rational>> solve(RationalMatrix m, std::vector<Rational> b) {
  if (static_cast<int>(b.size()) != m.rows) throw std::invalid_argument("exact::solve: size mismatch");
  RationalMatrix aug(m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = b[static_cast<std::size_t>(i)];
  }
  std::vector<int> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols) return std::nullopt;  // row [0 ... 0 | 1]
  std::vector<Rational> x(static_cast<std::size_t>(m.cols), Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(static_cast<int>(r), m.cols);
  return x;
}

}  // namespace exact
}  // namespace extconvex
