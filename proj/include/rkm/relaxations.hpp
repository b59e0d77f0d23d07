#pragma once

// LP relaxations of Robust k-Median and MCSP, the assignment post-processor,
// and randomized rounding of the MCSP relaxation.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "rkm/core.hpp"
#include "rkm/lp_model.hpp"
#include "rkm/mcsp.hpp"
#include "rkm/rng.hpp"

namespace rkm {

/// Column layout of the Robust k-Median relaxation: x_j for every site, then
/// y_ij client-major, then T.
struct RkmLpLayout {
  int n_sites = 0;
  int n_clients = 0;

  int x(int site) const noexcept { return site; }
  int y(int client, int site) const noexcept { return n_sites + client * n_sites + site; }
  int t() const noexcept { return n_sites + n_clients * n_sites; }
};

inline RkmLpLayout rkm_lp_layout(const RkmInstance& inst) {
  return {inst.n_facilities(), inst.n_clients()};
}

/// min T  s.t.  y_ij <= x_j,  sum_j y_ij >= 1,  sum_{i in g} d(i,j) y_ij <= T,
/// sum_j x_j <= k,  x, y in [0, 1],  T >= 0.
inline LpModel build_rkm_lp(const RkmInstance& inst) {
  const auto layout = rkm_lp_layout(inst);
  const int nf = layout.n_sites;
  const int nc = layout.n_clients;
  LpModel model;
  model.vars.reserve(static_cast<std::size_t>(layout.t() + 1));
  for (int j = 0; j < nf; ++j) {
    model.add_variable("x_" + std::to_string(j), 0.0, 1.0);
  }
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nf; ++j) {
      model.add_variable("y_" + std::to_string(i) + "_" + std::to_string(j), 0.0, 1.0);
    }
  }
  model.add_variable("T", 0.0, kInf);
  model.objective = {{layout.t(), 1.0}};

  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nf; ++j) {
      model.add_row("open_" + std::to_string(i) + "_" + std::to_string(j),
                    {{layout.y(i, j), 1.0}, {layout.x(j), -1.0}}, Sense::Le, 0.0);
    }
  }
  for (int i = 0; i < nc; ++i) {
    std::vector<LpTerm> terms;
    terms.reserve(static_cast<std::size_t>(nf));
    for (int j = 0; j < nf; ++j) {
      terms.push_back({layout.y(i, j), 1.0});
    }
    model.add_row("serve_" + std::to_string(i), std::move(terms), Sense::Ge, 1.0);
  }
  for (int g = 0; g < inst.n_groups(); ++g) {
    // Duplicated clients accumulate their distance with multiplicity.
    std::vector<int> mult(static_cast<std::size_t>(nc), 0);
    for (int c : inst.groups[static_cast<std::size_t>(g)]) {
      ++mult[static_cast<std::size_t>(c)];
    }
    std::vector<LpTerm> terms;
    for (int i = 0; i < nc; ++i) {
      if (mult[static_cast<std::size_t>(i)] == 0) {
        continue;
      }
      for (int j = 0; j < nf; ++j) {
        const double d = inst.distance(i, j) * mult[static_cast<std::size_t>(i)];
        if (d != 0.0) {
          terms.push_back({layout.y(i, j), d});
        }
      }
    }
    terms.push_back({layout.t(), -1.0});
    model.add_row("group_" + std::to_string(g), std::move(terms), Sense::Le, 0.0);
  }
  std::vector<LpTerm> budget;
  for (int j = 0; j < nf; ++j) {
    budget.push_back({layout.x(j), 1.0});
  }
  model.add_row("budget", std::move(budget), Sense::Le, static_cast<double>(inst.k));
  return model;
}

/// Rewrites y so each client fills its demand from nearest sites first:
/// y_{i,j_l} = min(x_{j_l}, 1 - sum of earlier y). Afterwards y_ij > 0 only
/// where x_j > 0, no group cost increases, and T is reset to the max group
/// cost.
inline std::vector<double> nearest_first_assignment(const RkmInstance& inst,
                                                    const std::vector<double>& values) {
  const auto layout = rkm_lp_layout(inst);
  auto out = values;
  std::vector<int> order(static_cast<std::size_t>(layout.n_sites));
  for (int i = 0; i < layout.n_clients; ++i) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return inst.distance(i, a) < inst.distance(i, b); });
    double remaining = 1.0;
    for (int j : order) {
      const double take = std::max(0.0, std::min(values[static_cast<std::size_t>(layout.x(j))], remaining));
      out[static_cast<std::size_t>(layout.y(i, j))] = take;
      remaining -= take;
    }
  }
  double worst = 0.0;
  for (const auto& g : inst.groups) {
    double cost = 0.0;
    for (int c : g) {
      for (int j = 0; j < layout.n_sites; ++j) {
        cost += inst.distance(c, j) * out[static_cast<std::size_t>(layout.y(c, j))];
      }
    }
    worst = std::max(worst, cost);
  }
  out[static_cast<std::size_t>(layout.t())] = worst;
  return out;
}

/// min z  s.t.  sum_{X : e in X} y(X) <= z for each e,  sum_X y(X) = t,
/// y in [0, 1],  z >= 0. Columns: y(X) per set, then z.
inline LpModel build_mcsp_lp(const McspInstance& inst) {
  LpModel model;
  const int n = inst.n_sets();
  for (int s = 0; s < n; ++s) {
    model.add_variable("y_" + std::to_string(s), 0.0, 1.0);
  }
  const int z = model.add_variable("z", 0.0, kInf);
  model.objective = {{z, 1.0}};
  std::vector<std::vector<LpTerm>> rows(static_cast<std::size_t>(inst.m));
  for (int s = 0; s < n; ++s) {
    for (int e : inst.sets[static_cast<std::size_t>(s)]) {
      rows[static_cast<std::size_t>(e)].push_back({s, 1.0});
    }
  }
  for (int e = 0; e < inst.m; ++e) {
    auto terms = std::move(rows[static_cast<std::size_t>(e)]);
    terms.push_back({z, -1.0});
    model.add_row("elem_" + std::to_string(e), std::move(terms), Sense::Le, 0.0);
  }
  std::vector<LpTerm> card;
  for (int s = 0; s < n; ++s) {
    card.push_back({s, 1.0});
  }
  model.add_row("cardinality", std::move(card), Sense::Eq, static_cast<double>(inst.t));
  return model;
}

enum class RoundingRepair { None, TrimOrPad };

struct RoundingResult {
  SetSelection drawn;      // independent draws, before repair
  int congestion_before = 0;
  SetSelection selection;  // after repair (equal to drawn when repair = None)
  int congestion_after = 0;
  bool repaired = false;   // true when trim_or_pad changed the draw
};

/// Picks each set independently with probability min(1, 2 y(X)). With
/// TrimOrPad, surplus sets are dropped one at a time, always the chosen set
/// whose most congested element is highest (then larger summed congestion,
/// then lower index), and a shortfall is filled with the lowest-index
/// unchosen sets, so exactly t sets remain.
inline RoundingResult round_mcsp(const McspInstance& inst, const std::vector<double>& lp_values,
                                 std::uint64_t seed, RoundingRepair repair = RoundingRepair::None) {
  if (static_cast<int>(lp_values.size()) < inst.n_sets()) {
    fail(ErrorKind::Parameter, "LP solution has fewer values than sets");
  }
  Rng rng(seed);
  RoundingResult res;
  for (int s = 0; s < inst.n_sets(); ++s) {
    const double p = std::min(1.0, 2.0 * lp_values[static_cast<std::size_t>(s)]);
    // One draw per set keeps the stream aligned across instances.
    const double u = rng.uniform();
    if (u < p) {
      res.drawn.chosen.push_back(s);
    }
  }
  res.congestion_before = congestion_of(inst, res.drawn.chosen).max_congestion;
  res.selection = res.drawn;
  if (repair == RoundingRepair::TrimOrPad) {
    auto& chosen = res.selection.chosen;
    while (static_cast<int>(chosen.size()) > inst.t) {
      const auto cong = congestion_of(inst, chosen).per_element;
      std::size_t victim = 0;
      int victim_peak = -1;
      long victim_sum = -1;
      for (std::size_t i = 0; i < chosen.size(); ++i) {
        int peak = 0;
        long sum = 0;
        for (int e : inst.sets[static_cast<std::size_t>(chosen[i])]) {
          peak = std::max(peak, cong[static_cast<std::size_t>(e)]);
          sum += cong[static_cast<std::size_t>(e)];
        }
        if (peak > victim_peak || (peak == victim_peak && sum > victim_sum)) {
          victim = i;
          victim_peak = peak;
          victim_sum = sum;
        }
      }
      chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(victim));
      res.repaired = true;
    }
    for (int s = 0; s < inst.n_sets() && static_cast<int>(chosen.size()) < inst.t; ++s) {
      if (!std::binary_search(chosen.begin(), chosen.end(), s)) {
        chosen.insert(std::lower_bound(chosen.begin(), chosen.end(), s), s);
        res.repaired = true;
      }
    }
  }
  res.congestion_after = congestion_of(inst, res.selection.chosen).max_congestion;
  return res;
}

} // namespace rkm
