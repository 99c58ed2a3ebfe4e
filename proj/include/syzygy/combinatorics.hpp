#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "syzygy/errors.hpp"

namespace syz {

/// Binomial coefficient C(n, k) as an exact 64-bit value.
/// Throws on intermediate overflow instead of wrapping.
inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (2 * k > n) k = n - k;
  std::uint64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i at every step
    std::uint64_t m = static_cast<std::uint64_t>(n - k + i);
    if (r > UINT64_MAX / m) throw config_error("binomial: overflow");
    r = r * m / static_cast<std::uint64_t>(i);
  }
  return r;
}

// p-subsets of {0, ..., h0-1} in colexicographic order, indexed by the
// combinatorial number system: rank{s_1 < ... < s_p} = sum_k C(s_k, k).

/// Colex rank of a strictly increasing subset.
inline std::uint64_t wedge_rank(const std::vector<std::uint32_t>& subset) {
  std::uint64_t r = 0;
  for (std::size_t k = 0; k < subset.size(); ++k) {
    assert(k == 0 || subset[k] > subset[k - 1]);
    r += binomial(subset[k], static_cast<std::int64_t>(k) + 1);
  }
  return r;
}

/// Inverse of wedge_rank among p-subsets of {0, ..., h0-1}.
inline std::vector<std::uint32_t> wedge_unrank(std::uint64_t rank, std::uint32_t p,
                                               std::uint32_t h0) {
  if (rank >= binomial(h0, p))
    throw config_error("wedge_unrank: rank out of range");
  std::vector<std::uint32_t> subset(p);
  std::uint32_t hi = h0;
  for (std::uint32_t k = p; k >= 1; --k) {
    // largest s with C(s, k) <= rank
    std::uint32_t s = k - 1;
    std::uint64_t c = 0;  // C(s, k) at s = k-1
    while (s + 1 < hi) {
      std::uint64_t next = binomial(s + 1, k);
      if (next > rank) break;
      ++s;
      c = next;
    }
    subset[k - 1] = s;
    rank -= c;
    hi = s;
  }
  return subset;
}

/// First p-subset in colex order: {0, 1, ..., p-1}.
inline std::vector<std::uint32_t> first_subset(std::uint32_t p) {
  std::vector<std::uint32_t> s(p);
  for (std::uint32_t i = 0; i < p; ++i) s[i] = i;
  return s;
}

/// Advance to the colex successor among p-subsets of {0, ..., h0-1}.
/// Returns false when the input was the last subset.
inline bool next_subset(std::vector<std::uint32_t>& s, std::uint32_t h0) {
  const std::size_t p = s.size();
  for (std::size_t k = 0; k < p; ++k) {
    std::uint32_t limit = (k + 1 < p) ? s[k + 1] : h0;
    if (s[k] + 1 < limit) {
      ++s[k];
      for (std::size_t i = 0; i < k; ++i) s[i] = static_cast<std::uint32_t>(i);
      return true;
    }
  }
  return false;
}

}  // namespace syz
