#pragma once

// Exact Robust k-Median oracles: exhaustive enumeration and an LP-bounded
// branch-and-bound over the facility variables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rkm/combinatorics.hpp"
#include "rkm/core.hpp"
#include "rkm/error.hpp"
#include "rkm/heuristics.hpp"
#include "rkm/relaxations.hpp"
#include "rkm/simplex.hpp"

namespace rkm {

struct ExactResult {
  double opt_value = 0.0;
  FacilitySolution witness;
  long nodes_explored = 0;
  bool proved_optimal = false;
  double root_bound = 0.0;            // LP value at the root (branch-and-bound only)
  std::vector<double> incumbent_trace; // incumbent value after each improvement
  std::vector<std::string> warnings;
};

inline constexpr std::uint64_t kDefaultRkmEnumerationCap = 10'000'000;

/// Minimum over all k-subsets; the witness is the lexicographically smallest
/// optimal subset.
inline ExactResult brute_force_rkm(const RkmInstance& inst,
                                   std::uint64_t cap = kDefaultRkmEnumerationCap) {
  if (inst.k < 1 || inst.k > inst.n_facilities()) {
    fail(ErrorKind::Parameter, "k must lie in [1, n_facilities]");
  }
  const auto count = binomial(static_cast<std::uint64_t>(inst.n_facilities()), static_cast<std::uint64_t>(inst.k));
  if (count > cap) {
    fail(ErrorKind::Size, "enumeration of " + std::to_string(count) + " facility sets exceeds cap " +
                              std::to_string(cap));
  }
  const DistanceTable dist(inst);
  std::vector<double> client_cost(static_cast<std::size_t>(inst.n_clients()));
  ExactResult res;
  res.opt_value = std::numeric_limits<double>::infinity();
  for_each_combination(inst.n_facilities(), inst.k, [&](const std::vector<int>& open) {
    ++res.nodes_explored;
    for (int c = 0; c < inst.n_clients(); ++c) {
      const auto row = dist.row(c);
      double best = std::numeric_limits<double>::infinity();
      for (int s : open) {
        best = std::min(best, row[static_cast<std::size_t>(s)]);
      }
      client_cost[static_cast<std::size_t>(c)] = best;
    }
    double worst = 0.0;
    for (const auto& g : inst.groups) {
      double sum = 0.0;
      for (int c : g) {
        sum += client_cost[static_cast<std::size_t>(c)];
      }
      worst = std::max(worst, sum);
      if (worst >= res.opt_value) {
        return;
      }
    }
    res.opt_value = worst;
    res.witness.open = open;
    res.incumbent_trace.push_back(worst);
  });
  res.proved_optimal = true;
  return res;
}

struct BranchAndBoundOptions {
  long node_budget = 100'000;
  int resort_interval = 1'000; // nodes between best-bound re-sorts of the open list
  SimplexOptions simplex{};
};

/// Depth-first branch-and-bound on x_j in {0, 1}. Each node solves the
/// relaxation with the node's fixings as variable bounds; the most fractional
/// free x_j (lowest index on ties) is branched with x_j = 1 explored first.
/// Every `resort_interval` nodes the open list is re-sorted so the best bound
/// is expanded next. The incumbent starts from greedy_down and is improved by
/// rounding each node's LP point (open the k largest x_j).
inline ExactResult branch_and_bound(const RkmInstance& inst, const BranchAndBoundOptions& opt = {}) {
  if (inst.k < 1 || inst.k > inst.n_facilities()) {
    fail(ErrorKind::Parameter, "k must lie in [1, n_facilities]");
  }
  const int nf = inst.n_facilities();
  const DistanceTable dist(inst);
  auto model = build_rkm_lp(inst);
  const auto layout = rkm_lp_layout(inst);

  ExactResult res;
  auto consider = [&](std::vector<int> open) {
    // Fewer than k open sites never beats k: pad with the lowest free indices.
    std::sort(open.begin(), open.end());
    for (int s = 0; s < nf && static_cast<int>(open.size()) < inst.k; ++s) {
      if (!std::binary_search(open.begin(), open.end(), s)) {
        open.insert(std::lower_bound(open.begin(), open.end(), s), s);
      }
    }
    const double v = eval_objective(dist, inst.groups, open).value;
    if (res.witness.open.empty() || v < res.opt_value) {
      res.opt_value = v;
      res.witness.open = std::move(open);
      res.incumbent_trace.push_back(v);
    }
  };
  consider(greedy_down(inst).solution.open);

  struct Node {
    std::vector<signed char> fix; // -1 free, 0 closed, 1 open
    double bound = -std::numeric_limits<double>::infinity();
  };
  std::vector<Node> open_nodes;
  open_nodes.push_back({std::vector<signed char>(static_cast<std::size_t>(nf), -1), -std::numeric_limits<double>::infinity()});

  const auto prune_tol = [&] { return 1e-9 * std::max(1.0, std::abs(res.opt_value)); };
  bool root = true;
  while (!open_nodes.empty() && res.nodes_explored < opt.node_budget) {
    if (res.nodes_explored > 0 && res.nodes_explored % opt.resort_interval == 0) {
      std::stable_sort(open_nodes.begin(), open_nodes.end(),
                       [](const Node& a, const Node& b) { return a.bound > b.bound; });
    }
    Node node = std::move(open_nodes.back());
    open_nodes.pop_back();
    ++res.nodes_explored;
    if (node.bound >= res.opt_value - prune_tol()) {
      continue;
    }

    int n_one = 0;
    int n_free = 0;
    for (auto f : node.fix) {
      n_one += f == 1;
      n_free += f == -1;
    }
    if (n_one > inst.k) {
      continue;
    }
    if (n_one == inst.k || n_one + n_free <= inst.k) {
      std::vector<int> leaf;
      for (int s = 0; s < nf; ++s) {
        if (node.fix[static_cast<std::size_t>(s)] != 0) {
          leaf.push_back(s);
        }
      }
      if (n_one == inst.k) {
        leaf.erase(std::remove_if(leaf.begin(), leaf.end(),
                                  [&](int s) { return node.fix[static_cast<std::size_t>(s)] != 1; }),
                   leaf.end());
      }
      consider(std::move(leaf));
      continue;
    }

    for (int s = 0; s < nf; ++s) {
      const auto f = node.fix[static_cast<std::size_t>(s)];
      auto& var = model.vars[static_cast<std::size_t>(layout.x(s))];
      var.lower = f == 1 ? 1.0 : 0.0;
      var.upper = f == 0 ? 0.0 : 1.0;
    }

    LpSolution lp;
    bool lp_ok = true;
    try {
      lp = solve_lp(model, opt.simplex);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Numerical) {
        throw;
      }
      lp_ok = false;
      res.warnings.push_back("node " + std::to_string(res.nodes_explored) + ": " + e.what() +
                             "; branching without a bound");
    }

    int branch_site = -1;
    double bound = node.bound;
    if (lp_ok) {
      if (lp.status == LpStatus::Infeasible) {
        continue;
      }
      bound = lp.objective;
      if (root) {
        res.root_bound = bound;
      }
      if (bound >= res.opt_value - prune_tol()) {
        root = false;
        continue;
      }
      // Rounding: fixed-open sites, then free sites by decreasing x.
      std::vector<int> order;
      for (int s = 0; s < nf; ++s) {
        if (node.fix[static_cast<std::size_t>(s)] == -1) {
          order.push_back(s);
        }
      }
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return lp.values[static_cast<std::size_t>(layout.x(a))] > lp.values[static_cast<std::size_t>(layout.x(b))];
      });
      std::vector<int> rounded;
      for (int s = 0; s < nf; ++s) {
        if (node.fix[static_cast<std::size_t>(s)] == 1) {
          rounded.push_back(s);
        }
      }
      for (int s : order) {
        if (static_cast<int>(rounded.size()) >= inst.k) {
          break;
        }
        rounded.push_back(s);
      }
      consider(std::move(rounded));
      if (bound >= res.opt_value - prune_tol()) {
        root = false;
        continue;
      }
      double most = 1e-6;
      for (int s = 0; s < nf; ++s) {
        if (node.fix[static_cast<std::size_t>(s)] != -1) {
          continue;
        }
        const double x = lp.values[static_cast<std::size_t>(layout.x(s))];
        const double frac = std::min(x, 1.0 - x);
        if (frac > most) {
          most = frac;
          branch_site = s;
        }
      }
      if (branch_site < 0) {
        // Integral x: the rounding above already evaluated this point.
        root = false;
        continue;
      }
    } else {
      for (int s = 0; s < nf; ++s) {
        if (node.fix[static_cast<std::size_t>(s)] == -1) {
          branch_site = s;
          break;
        }
      }
    }
    root = false;

    Node closed{node.fix, bound};
    closed.fix[static_cast<std::size_t>(branch_site)] = 0;
    Node opened{std::move(node.fix), bound};
    opened.fix[static_cast<std::size_t>(branch_site)] = 1;
    open_nodes.push_back(std::move(closed));
    open_nodes.push_back(std::move(opened));
  }
  res.proved_optimal = open_nodes.empty();
  return res;
}

} // namespace rkm
