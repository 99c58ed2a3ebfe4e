#pragma once

// Brute-force dense eliminators used as independent oracles in tests.
// Deliberately textbook row reduction, sharing no code with the library's
// sparse elimination path.

#include <cstdint>
#include <random>
#include <vector>

#include "syzygy/field.hpp"
#include "syzygy/sparse.hpp"

namespace oracle {

inline std::vector<std::vector<syz::Rational>> to_dense(const syz::SparseMatrix& m) {
  std::vector<std::vector<syz::Rational>> d(
      m.n_rows(), std::vector<syz::Rational>(m.n_cols(), 0));
  for (const auto& t : m.triplets()) d[t.row][t.col] = t.value;
  return d;
}

inline std::size_t dense_rank_rationals(std::vector<std::vector<syz::Rational>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    syz::Rational inv = 1 / a[rank][c];
    for (std::size_t j = c; j < cols; ++j) a[rank][j] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      syz::Rational f = a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[r][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

inline std::size_t dense_rank_mod_p(const syz::SparseMatrix& m, std::int64_t p) {
  std::vector<std::vector<std::int64_t>> a(
      m.n_rows(), std::vector<std::int64_t>(m.n_cols(), 0));
  for (const auto& t : m.triplets()) {
    std::int64_t v = t.value % p;
    if (v < 0) v += p;
    a[t.row][t.col] = v;
  }
  auto inv_mod = [&](std::int64_t x) {
    std::int64_t r = 1, e = p - 2, b = x % p;  // Fermat
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    std::int64_t inv = inv_mod(a[rank][c]);
    for (std::size_t j = c; j < cols; ++j) a[rank][j] = a[rank][j] * inv % p;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      std::int64_t f = a[r][c];
      for (std::size_t j = c; j < cols; ++j) {
        a[r][j] = (a[r][j] - f * a[rank][j]) % p;
        if (a[r][j] < 0) a[r][j] += p;
      }
    }
    ++rank;
  }
  return rank;
}

inline std::size_t dense_rank_rationals(const syz::SparseMatrix& m) {
  return dense_rank_rationals(to_dense(m));
}

/// Random sparse integer matrix with entries in [-bound, bound].
inline syz::SparseMatrix random_sparse(std::mt19937& rng, std::size_t rows,
                                       std::size_t cols, double density,
                                       int bound) {
  syz::SparseMatrix m(rows, cols);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> val(-bound, bound);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (coin(rng) < density) {
        int v = val(rng);
        if (v != 0) m.add(r, c, v);
      }
  m.finalize();
  return m;
}

}  // namespace oracle
