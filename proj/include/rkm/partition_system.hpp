#pragma once

// Partition systems: for every color c, an r-way partition A_c^0..A_c^{r-1}
// of a ground set Z such that any r parts taken from r distinct colors share
// an element.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rkm/combinatorics.hpp"
#include "rkm/error.hpp"
#include "rkm/rng.hpp"

namespace rkm {

struct PartitionSystem {
  int z_size = 0;
  int r = 0;
  int n_colors = 0;
  std::vector<std::uint8_t> assign; // assign[c * z_size + z] = part of z under color c

  int part(int color, int z) const noexcept {
    return assign[static_cast<std::size_t>(color) * static_cast<std::size_t>(z_size) + static_cast<std::size_t>(z)];
  }
  bool operator==(const PartitionSystem&) const = default;
};

enum class VerifyMode { Auto, Exhaustive, Sampled };

inline constexpr std::uint64_t kExhaustiveTupleLimit = 1'000'000;
inline constexpr int kSampledTuples = 100'000;
inline constexpr int kConstructionAttempts = 8;

struct PartitionVerdict {
  bool ok = true;
  bool exhaustive = true;
  std::uint64_t tuples_checked = 0;
  std::vector<int> colors; // violating tuple when !ok
  std::vector<int> parts;

  std::string describe() const {
    if (ok) {
      return "ok";
    }
    std::string s = "empty intersection:";
    for (std::size_t i = 0; i < colors.size(); ++i) {
      s += " A_" + std::to_string(colors[i]) + "^" + std::to_string(parts[i]);
    }
    return s;
  }
};

/// Structural checks: sizes agree and every part index lies in [0, r).
inline std::vector<std::string> validate_partition_system(const PartitionSystem& ps) {
  std::vector<std::string> out;
  if (ps.r < 2 || ps.r > 255) {
    out.push_back("r must lie in [2, 255]");
  }
  if (ps.n_colors < 1) {
    out.push_back("n_colors must be positive");
  }
  if (ps.z_size < 1) {
    out.push_back("z_size must be positive");
  }
  if (ps.assign.size() != static_cast<std::size_t>(std::max(ps.n_colors, 0)) * static_cast<std::size_t>(std::max(ps.z_size, 0))) {
    out.push_back("assignment table has wrong size");
    return out;
  }
  for (std::size_t i = 0; i < ps.assign.size(); ++i) {
    if (ps.assign[i] >= ps.r) {
      out.push_back("assign[" + std::to_string(i) + "] is not a part index");
      break;
    }
  }
  return out;
}

/// ceil(d * r^{d r} * ln max(n_colors, 2)); throws when the value does not fit.
inline int default_z_size(int r, int n_colors, double d = 3.0) {
  const double v = std::ceil(d * std::pow(static_cast<double>(r), d * r) * std::log(std::max(n_colors, 2)));
  if (!(v <= 2.0e9)) {
    fail(ErrorKind::Size, "default ground-set size for r = " + std::to_string(r) + " exceeds 2e9");
  }
  return static_cast<int>(v);
}

namespace detail {

// Marks which part-index codes sum_i part(c_i, z) * r^i occur for the given
// colors; returns the smallest missing code, or nullopt when all occur.
inline std::optional<std::uint64_t> first_missing_code(const PartitionSystem& ps, const std::vector<int>& colors,
                                                       std::vector<char>& seen) {
  const std::uint64_t codes = ipow(static_cast<std::uint64_t>(ps.r), static_cast<unsigned>(colors.size()));
  seen.assign(codes, 0);
  std::uint64_t marked = 0;
  for (int z = 0; z < ps.z_size && marked < codes; ++z) {
    std::uint64_t code = 0;
    for (std::size_t i = colors.size(); i-- > 0;) {
      code = code * static_cast<std::uint64_t>(ps.r) + ps.part(colors[i], z);
    }
    if (!seen[code]) {
      seen[code] = 1;
      ++marked;
    }
  }
  if (marked == codes) {
    return std::nullopt;
  }
  for (std::uint64_t c = 0; c < codes; ++c) {
    if (!seen[c]) {
      return c;
    }
  }
  return std::nullopt;
}

} // namespace detail

/// Checks the r-intersecting property. Auto picks exhaustive verification when
/// C(n_colors, r) * r^r <= 1e6 and otherwise checks 1e5 uniformly drawn tuples.
inline PartitionVerdict verify_partition_system(const PartitionSystem& ps, VerifyMode mode = VerifyMode::Auto,
                                                std::uint64_t seed = 0) {
  if (auto v = validate_partition_system(ps); !v.empty()) {
    fail(ErrorKind::Data, "invalid partition system: " + v.front());
  }
  PartitionVerdict verdict;
  if (ps.n_colors < ps.r) {
    // Fewer than r colors: no tuple of r distinct colors exists.
    verdict.tuples_checked = 0;
    return verdict;
  }
  const auto r64 = static_cast<std::uint64_t>(ps.r);
  const std::uint64_t total = binomial(static_cast<std::uint64_t>(ps.n_colors), r64) *
                              ipow(r64, static_cast<unsigned>(ps.r));
  if (mode == VerifyMode::Auto) {
    mode = total <= kExhaustiveTupleLimit ? VerifyMode::Exhaustive : VerifyMode::Sampled;
  }
  if (mode == VerifyMode::Exhaustive) {
    verdict.exhaustive = true;
    std::vector<char> seen;
    auto colors = first_combination(ps.r);
    do {
      verdict.tuples_checked += ipow(r64, static_cast<unsigned>(ps.r));
      if (auto missing = detail::first_missing_code(ps, colors, seen)) {
        verdict.ok = false;
        verdict.colors = colors;
        std::uint64_t code = *missing;
        for (int i = 0; i < ps.r; ++i) {
          verdict.parts.push_back(static_cast<int>(code % r64));
          code /= r64;
        }
        return verdict;
      }
    } while (next_combination(colors, ps.n_colors));
    return verdict;
  }

  verdict.exhaustive = false;
  Rng rng(seed);
  for (int s = 0; s < kSampledTuples; ++s) {
    auto colors = rng.sample_without_replacement(ps.n_colors, ps.r);
    std::sort(colors.begin(), colors.end());
    std::vector<int> parts(static_cast<std::size_t>(ps.r));
    for (auto& p : parts) {
      p = static_cast<int>(rng.below(r64));
    }
    ++verdict.tuples_checked;
    bool hit = false;
    for (int z = 0; z < ps.z_size && !hit; ++z) {
      hit = true;
      for (int i = 0; i < ps.r; ++i) {
        if (ps.part(colors[static_cast<std::size_t>(i)], z) != parts[static_cast<std::size_t>(i)]) {
          hit = false;
          break;
        }
      }
    }
    if (!hit) {
      verdict.ok = false;
      verdict.colors = std::move(colors);
      verdict.parts = std::move(parts);
      return verdict;
    }
  }
  return verdict;
}

/// Independent uniform part index for every (color, element), drawn color by
/// color. No verification.
inline PartitionSystem random_partition_system(int r, int n_colors, int z_size, std::uint64_t seed) {
  PartitionSystem ps{z_size, r, n_colors, {}};
  Rng rng(seed);
  ps.assign.resize(static_cast<std::size_t>(n_colors) * static_cast<std::size_t>(z_size));
  for (auto& a : ps.assign) {
    a = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(r)));
  }
  return ps;
}

inline constexpr std::uint64_t kHypercubeCap = 10'000'000;

/// Z = [r]^{n_colors}; element z lies in A_c^j when the c-th base-r digit of z
/// is j, so every intersection of parts from distinct colors is non-empty.
inline PartitionSystem hypercube_partition_system(int r, int n_colors) {
  if (r < 2 || r > 255 || n_colors < 1) {
    fail(ErrorKind::Parameter, "hypercube system needs r in [2, 255] and at least one color");
  }
  const auto z = ipow(static_cast<std::uint64_t>(r), static_cast<unsigned>(n_colors));
  if (z > kHypercubeCap || z == 0) {
    fail(ErrorKind::Size, "hypercube ground set r^n_colors exceeds " + std::to_string(kHypercubeCap));
  }
  PartitionSystem ps{static_cast<int>(z), r, n_colors, {}};
  ps.assign.resize(static_cast<std::size_t>(n_colors) * z);
  for (std::uint64_t e = 0; e < z; ++e) {
    std::uint64_t rest = e;
    for (int c = 0; c < n_colors; ++c) {
      ps.assign[static_cast<std::size_t>(c) * z + e] = static_cast<std::uint8_t>(rest % static_cast<std::uint64_t>(r));
      rest /= static_cast<std::uint64_t>(r);
    }
  }
  return ps;
}

struct PartitionBuildOptions {
  std::optional<int> z_size; // default_z_size(r, n_colors, d) when unset
  double d = 3.0;
  int attempts = kConstructionAttempts;
  VerifyMode verify = VerifyMode::Auto;
};

struct PartitionBuild {
  PartitionSystem system;
  PartitionVerdict verdict;
  int attempts_used = 0;
  std::uint64_t seed_used = 0;
};

/// Random construction followed by verification. Attempt 0 uses `seed`;
/// attempt a > 0 uses derive_seed(seed, a). Throws a construction error with
/// the last violating tuple once every attempt fails.
inline PartitionBuild build_partition_system(int r, int n_colors, std::uint64_t seed,
                                             const PartitionBuildOptions& opt = {}) {
  if (r < 2 || r > 255) {
    fail(ErrorKind::Parameter, "r must lie in [2, 255]");
  }
  if (n_colors < r) {
    fail(ErrorKind::Parameter, "n_colors must be at least r");
  }
  const int z_size = opt.z_size ? *opt.z_size : default_z_size(r, n_colors, opt.d);
  if (z_size < 1) {
    fail(ErrorKind::Parameter, "z_size must be positive");
  }
  if (opt.attempts < 1) {
    fail(ErrorKind::Parameter, "attempts must be positive");
  }
  PartitionVerdict last;
  for (int a = 0; a < opt.attempts; ++a) {
    const std::uint64_t s = a == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(a));
    auto ps = random_partition_system(r, n_colors, z_size, s);
    last = verify_partition_system(ps, opt.verify, derive_seed(s, 0xFFFF));
    if (last.ok) {
      return {std::move(ps), std::move(last), a + 1, s};
    }
  }
  fail(ErrorKind::Construction, "partition system failed verification after " + std::to_string(opt.attempts) +
                                    " attempts (r = " + std::to_string(r) + ", colors = " +
                                    std::to_string(n_colors) + ", |Z| = " + std::to_string(z_size) +
                                    "); last violation: " + last.describe());
}

} // namespace rkm
