#pragma once

// Wilcoxon signed-rank test for paired samples.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rkm/error.hpp"

namespace rkm {

enum class WilcoxonMode { Auto, Exact, Normal };

struct WilcoxonResult {
  double statistic = 0.0; // min(W+, W-)
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_value = 1.0;   // two-sided
  int n = 0;              // non-zero differences
  bool exact = false;
};

inline constexpr int kWilcoxonMinPairs = 6;
inline constexpr int kWilcoxonExactMax = 25;

/// Differences a_i - b_i equal to zero are dropped; the rest are ranked by
/// absolute value with average ranks on ties. Auto uses the exact null
/// distribution for n <= 25 and the normal approximation (tie and continuity
/// corrected) above. The exact distribution enumerates sign patterns over the
/// actual (possibly tied) ranks.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                           WilcoxonMode mode = WilcoxonMode::Auto) {
  if (a.size() != b.size()) {
    fail(ErrorKind::Parameter, "paired samples must have equal length");
  }
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] - b[i];
    if (x != 0.0) {
      d.push_back(x);
    }
  }
  const int n = static_cast<int>(d.size());
  if (n < kWilcoxonMinPairs) {
    fail(ErrorKind::Data, "insufficient data: " + std::to_string(n) + " non-zero differences, need " +
                              std::to_string(kWilcoxonMinPairs));
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return std::abs(d[static_cast<std::size_t>(x)]) < std::abs(d[static_cast<std::size_t>(y)]); });
  std::vector<double> rank(static_cast<std::size_t>(n));
  double tie_term = 0.0; // sum over tie blocks of (t^3 - t)
  for (int i = 0; i < n;) {
    int j = i;
    while (j + 1 < n && std::abs(d[static_cast<std::size_t>(order[static_cast<std::size_t>(j + 1)])]) ==
                            std::abs(d[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])) {
      ++j;
    }
    const double avg = (i + j + 2) / 2.0;
    for (int k = i; k <= j; ++k) {
      rank[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = avg;
    }
    const double t = j - i + 1;
    tie_term += t * t * t - t;
    i = j + 1;
  }

  WilcoxonResult res;
  res.n = n;
  for (int i = 0; i < n; ++i) {
    (d[static_cast<std::size_t>(i)] > 0 ? res.w_plus : res.w_minus) += rank[static_cast<std::size_t>(i)];
  }
  res.statistic = std::min(res.w_plus, res.w_minus);
  if (mode == WilcoxonMode::Auto) {
    mode = n <= kWilcoxonExactMax ? WilcoxonMode::Exact : WilcoxonMode::Normal;
  }

  if (mode == WilcoxonMode::Exact) {
    if (n > 60) {
      fail(ErrorKind::Size, "exact null distribution supports at most 60 pairs");
    }
    // Average ranks are multiples of 1/2, so doubled ranks are integers.
    std::vector<int> r2(static_cast<std::size_t>(n));
    int total = 0;
    for (int i = 0; i < n; ++i) {
      r2[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(2.0 * rank[static_cast<std::size_t>(i)]));
      total += r2[static_cast<std::size_t>(i)];
    }
    // count[w] = number of sign patterns whose doubled W+ equals w, scaled by
    // 2^-n as we go to stay in range.
    std::vector<double> count(static_cast<std::size_t>(total + 1), 0.0);
    count[0] = 1.0;
    for (int i = 0; i < n; ++i) {
      const int r = r2[static_cast<std::size_t>(i)];
      for (int w = total; w >= 0; --w) {
        const double keep = count[static_cast<std::size_t>(w)];
        const double add = w >= r ? count[static_cast<std::size_t>(w - r)] : 0.0;
        count[static_cast<std::size_t>(w)] = 0.5 * (keep + add);
      }
    }
    const int obs = static_cast<int>(std::lround(2.0 * res.statistic));
    double lower = 0.0;
    for (int w = 0; w <= obs; ++w) {
      lower += count[static_cast<std::size_t>(w)];
    }
    res.p_value = std::min(1.0, 2.0 * lower);
    res.exact = true;
    return res;
  }

  const double nn = n;
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) {
    res.p_value = 1.0;
    return res;
  }
  const double diff = std::abs(res.statistic - mean);
  const double z = std::max(0.0, diff - 0.5) / std::sqrt(var);
  res.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return res;
}

} // namespace rkm
