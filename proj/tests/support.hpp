#pragma once

// Shared fixtures and independent reference implementations for the tests.

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "rkm/core.hpp"
#include "rkm/generators.hpp"
#include "rkm/mcsp.hpp"
#include "rkm/rng.hpp"

namespace rkm::test {

/// Distance to the nearest open site, summed per group, maximized. Written
/// straight from the definition with no shared code.
inline double naive_objective(const RkmInstance& inst, const std::vector<int>& open) {
  double worst = 0.0;
  for (const auto& g : inst.groups) {
    double sum = 0.0;
    for (int c : g) {
      double best = std::numeric_limits<double>::infinity();
      for (int s : open) {
        best = std::min(best, inst.distance(c, s));
      }
      sum += best;
    }
    worst = std::max(worst, sum);
  }
  return worst;
}

/// Plain recursive enumeration of all k-subsets, independent of
/// combinatorics.hpp.
inline double naive_optimum(const RkmInstance& inst) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> cur;
  auto rec = [&](auto&& self, int next) -> void {
    if (static_cast<int>(cur.size()) == inst.k) {
      best = std::min(best, naive_objective(inst, cur));
      return;
    }
    for (int s = next; s < inst.n_facilities(); ++s) {
      cur.push_back(s);
      self(self, s + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

inline int naive_mcsp_optimum(const McspInstance& inst) {
  int best = std::numeric_limits<int>::max();
  const int n = inst.n_sets();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != inst.t) {
      continue;
    }
    std::vector<int> cnt(static_cast<std::size_t>(inst.m), 0);
    int worst = 0;
    for (int s = 0; s < n; ++s) {
      if (mask & (1u << s)) {
        for (int e : inst.sets[static_cast<std::size_t>(s)]) {
          worst = std::max(worst, ++cnt[static_cast<std::size_t>(e)]);
        }
      }
    }
    best = std::min(best, worst);
  }
  return best;
}

/// Random MCSP instance on m elements with n sets covering the universe.
inline McspInstance random_mcsp(Rng& rng, int m, int n) {
  McspInstance inst;
  inst.m = m;
  inst.sets.assign(static_cast<std::size_t>(n), {});
  for (int e = 0; e < m; ++e) {
    // Every element lands in one forced set plus random extras.
    inst.sets[rng.below(static_cast<std::uint64_t>(n))].push_back(e);
    for (int s = 0; s < n; ++s) {
      if (rng.uniform() < 0.3) {
        inst.sets[static_cast<std::size_t>(s)].push_back(e);
      }
    }
  }
  for (int s = 0; s < n; ++s) {
    auto& set = inst.sets[static_cast<std::size_t>(s)];
    if (set.empty()) {
      set.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(m))));
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  inst.t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
  return inst;
}

inline RkmInstance small_planar(Family f, int n_facilities, int n_groups, int per_group, int k, std::uint64_t seed) {
  GenSpec s;
  s.family = f;
  s.n_facilities = n_facilities;
  s.n_groups = n_groups;
  s.clients_per_group = per_group;
  s.mean_clients_per_group = per_group;
  s.k = k;
  s.seed = seed;
  return generate(s).instance;
}

/// 3-point uniform metric, every point a site and a client, S1 = {a, b},
/// S2 = {c}.
inline RkmInstance three_point_uniform(int k) {
  RkmInstance inst;
  inst.metric = UniformMetric{3};
  inst.facility_sites = {0, 1, 2};
  inst.client_points = {0, 1, 2};
  inst.groups = {{0, 1}, {2}};
  inst.k = k;
  return inst;
}

/// Sites at 0 and 10 on a line; clients at 0, 10 and 5, each its own group.
inline RkmInstance line_0_10(int k) {
  RkmInstance inst;
  inst.metric = LineMetric{{0.0, 10.0, 5.0}};
  inst.facility_sites = {0, 1};
  inst.client_points = {0, 1, 2};
  inst.groups = {{0}, {1}, {2}};
  inst.k = k;
  return inst;
}

} // namespace rkm::test
