#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace rkm {

/// C(n, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // result * num / i is exact at every step; guard the multiplication.
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * num / i;
  }
  return result;
}

/// Saturating integer power.
inline std::uint64_t ipow(std::uint64_t base, unsigned exp) noexcept {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result *= base;
  }
  return result;
}

/// Advances `comb` (strictly increasing, values < n) to the next k-subset in
/// lexicographic order. Returns false after the last subset.
inline bool next_combination(std::vector<int>& comb, int n) noexcept {
  const int k = static_cast<int>(comb.size());
  int i = k - 1;
  while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i) {
    --i;
  }
  if (i < 0) {
    return false;
  }
  ++comb[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) {
    comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

inline std::vector<int> first_combination(int k) {
  std::vector<int> comb(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    comb[static_cast<std::size_t>(i)] = i;
  }
  return comb;
}

/// Calls f(subset) for every k-subset of [0, n) in lexicographic order.
template <class F>
void for_each_combination(int n, int k, F&& f) {
  if (k < 0 || k > n) {
    return;
  }
  auto comb = first_combination(k);
  do {
    f(static_cast<const std::vector<int>&>(comb));
  } while (next_combination(comb, n));
}

} // namespace rkm
