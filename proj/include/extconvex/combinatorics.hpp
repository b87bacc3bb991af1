#pragma once

#include <cstdint>
#include <mutex>
#include <map>
#include <stdexcept>
#include <vector>

namespace extconvex {

// Strictly increasing list of indices in [1, n].  The empty list is the
// (unique) multi-index of degree 0.
using MultiIndex = std::vector<int>;

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

inline bool is_valid_multi_index(const MultiIndex& I, int n) {
  int prev = 0;
  for (int i : I) {
    if (i <= prev || i > n) return false;
    prev = i;
  }
  return true;
}

// Lexicographic rank of I among all increasing k-sequences in [1, n].
inline int multi_index_rank(int n, const MultiIndex& I) {
  const int k = static_cast<int>(I.size());
  int rank = 0;
  int prev = 0;
  for (int j = 0; j < k; ++j) {
    for (int v = prev + 1; v < I[j]; ++v)
      rank += static_cast<int>(binomial(n - v, k - j - 1));
    prev = I[j];
  }
  return rank;
}

inline MultiIndex multi_index_at(int n, int k, int rank) {
  MultiIndex I;
  I.reserve(k);
  int v = 1;
  for (int j = 0; j < k; ++j) {
    for (;; ++v) {
      const int block = static_cast<int>(binomial(n - v, k - j - 1));
      if (rank < block) break;
      rank -= block;
    }
    I.push_back(v);
    ++v;
  }
  return I;
}

// Cached table of all multi-indices of T^n_k, lex order.
inline const std::vector<MultiIndex>& multi_indices(int n, int k) {
  static std::map<std::pair<int, int>, std::vector<MultiIndex>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find({n, k});
  if (it != cache.end()) return it->second;
  std::vector<MultiIndex> all;
  const int count = static_cast<int>(binomial(n, k));
  all.reserve(count);
  for (int r = 0; r < count; ++r) all.push_back(multi_index_at(n, k, r));
  return cache.emplace(std::make_pair(n, k), std::move(all)).first->second;
}

// Merges two disjoint increasing sequences, counting the transpositions
// needed to sort the concatenation I,J.  Returns 0 if they overlap,
// otherwise +/-1; the merged sequence is written to `out` when given.
inline int merge_sign(const MultiIndex& I, const MultiIndex& J, MultiIndex* out = nullptr) {
  if (out) {
    out->clear();
    out->reserve(I.size() + J.size());
  }
  std::size_t i = 0, j = 0;
  long inversions = 0;
  while (i < I.size() && j < J.size()) {
    if (I[i] == J[j]) return 0;
    if (I[i] < J[j]) {
      if (out) out->push_back(I[i]);
      ++i;
    } else {
      // J[j] jumps over the remaining entries of I
      inversions += static_cast<long>(I.size() - i);
      if (out) out->push_back(J[j]);
      ++j;
    }
  }
  while (i < I.size()) {
    if (out) out->push_back(I[i]);
    ++i;
  }
  while (j < J.size()) {
    if (out) out->push_back(J[j]);
    ++j;
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

inline MultiIndex complement(const MultiIndex& I, int n) {
  MultiIndex c;
  c.reserve(n - I.size());
  std::size_t p = 0;
  for (int v = 1; v <= n; ++v) {
    if (p < I.size() && I[p] == v) {
      ++p;
    } else {
      c.push_back(v);
    }
  }
  return c;
}

}  // namespace extconvex
