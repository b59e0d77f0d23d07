#pragma once

// Greedy up/down, steepest-descent swap local search, and its sampled
// variant. All four return exactly k open sites and report the objective as
// recomputed by eval_objective on the final solution.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rkm/combinatorics.hpp"
#include "rkm/core.hpp"
#include "rkm/error.hpp"
#include "rkm/rng.hpp"

namespace rkm {

struct HeuristicConfig {
  int ell = 2;            // maximum swap size
  int samples = 200;      // neighbors drawn per round (randomized search)
  int stall_rounds = 10;  // non-improving rounds before the randomized search stops
  std::uint64_t seed = 0; // initial solution and neighbor sampling
};

inline std::vector<std::string> validate_config(const HeuristicConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.ell < 1) {
    out.push_back("ell must be at least 1");
  }
  if (cfg.samples < 1) {
    out.push_back("samples must be at least 1");
  }
  if (cfg.stall_rounds < 1) {
    out.push_back("stall_rounds must be at least 1");
  }
  return out;
}

struct HeuristicResult {
  std::string solver;
  std::uint64_t seed = 0;
  double objective = 0.0;
  FacilitySolution solution;
  long iterations = 0;
  double wall_time_ms = 0.0;
  std::vector<double> trace; // objective after each accepted step
};

/// Keeps, for the current open set, each client's two nearest open sites so a
/// swap closing at most a few sites is priced in O(clients * opened sites).
class SwapEvaluator {
public:
  SwapEvaluator(const DistanceTable& dist, std::span<const Group> groups)
      : dist_(dist), groups_(groups), cost_(static_cast<std::size_t>(dist.n_clients()), 0.0),
        nearest_(static_cast<std::size_t>(dist.n_clients()), -1),
        second_(static_cast<std::size_t>(dist.n_clients()), -1),
        is_open_(static_cast<std::size_t>(dist.n_sites()), 0) {
    std::vector<char> used(static_cast<std::size_t>(dist.n_clients()), 0);
    for (const auto& g : groups) {
      for (int c : g) {
        used[static_cast<std::size_t>(c)] = 1;
      }
    }
    for (int c = 0; c < dist.n_clients(); ++c) {
      if (used[static_cast<std::size_t>(c)]) {
        active_.push_back(c);
      }
    }
  }

  void reset(std::vector<int> open) {
    std::sort(open.begin(), open.end());
    std::fill(is_open_.begin(), is_open_.end(), 0);
    for (int s : open) {
      is_open_[static_cast<std::size_t>(s)] = 1;
    }
    open_ = std::move(open);
    for (int c : active_) {
      refresh_client(c);
    }
    current_ = evaluate({}, {}, kNoCutoff);
  }

  const std::vector<int>& open() const noexcept { return open_; }
  double current() const noexcept { return current_; }
  bool is_open(int s) const noexcept { return is_open_[static_cast<std::size_t>(s)] != 0; }

  /// Objective after closing `close` and opening `add`. Returns +inf as soon
  /// as some group reaches `cutoff` (the caller only wants values below it).
  double evaluate(std::span<const int> close, std::span<const int> add, double cutoff) const {
    auto closed = [&](int s) { return std::find(close.begin(), close.end(), s) != close.end(); };
    for (int c : active_) {
      const auto row = dist_.row(c);
      const int n1 = nearest_[static_cast<std::size_t>(c)];
      const int n2 = second_[static_cast<std::size_t>(c)];
      double best;
      if (n1 >= 0 && !closed(n1)) {
        best = row[static_cast<std::size_t>(n1)];
      } else if (n2 >= 0 && !closed(n2)) {
        best = row[static_cast<std::size_t>(n2)];
      } else {
        best = std::numeric_limits<double>::infinity();
        for (int s : open_) {
          if (!closed(s)) {
            best = std::min(best, row[static_cast<std::size_t>(s)]);
          }
        }
      }
      for (int s : add) {
        best = std::min(best, row[static_cast<std::size_t>(s)]);
      }
      cost_[static_cast<std::size_t>(c)] = best;
    }
    double worst = 0.0;
    for (const auto& g : groups_) {
      double sum = 0.0;
      for (int c : g) {
        sum += cost_[static_cast<std::size_t>(c)];
      }
      if (sum >= cutoff) {
        return std::numeric_limits<double>::infinity();
      }
      worst = std::max(worst, sum);
    }
    return worst;
  }

  void apply(std::span<const int> close, std::span<const int> add) {
    for (int s : close) {
      is_open_[static_cast<std::size_t>(s)] = 0;
    }
    for (int s : add) {
      is_open_[static_cast<std::size_t>(s)] = 1;
    }
    open_.clear();
    for (int s = 0; s < dist_.n_sites(); ++s) {
      if (is_open_[static_cast<std::size_t>(s)]) {
        open_.push_back(s);
      }
    }
    for (int c : active_) {
      refresh_client(c);
    }
    current_ = evaluate({}, {}, kNoCutoff);
  }

private:
  static constexpr double kNoCutoff = std::numeric_limits<double>::infinity();

  void refresh_client(int c) {
    const auto row = dist_.row(c);
    int n1 = -1;
    int n2 = -1;
    for (int s : open_) {
      const double d = row[static_cast<std::size_t>(s)];
      if (n1 < 0 || d < row[static_cast<std::size_t>(n1)]) {
        n2 = n1;
        n1 = s;
      } else if (n2 < 0 || d < row[static_cast<std::size_t>(n2)]) {
        n2 = s;
      }
    }
    nearest_[static_cast<std::size_t>(c)] = n1;
    second_[static_cast<std::size_t>(c)] = n2;
  }

  const DistanceTable& dist_;
  std::span<const Group> groups_;
  mutable std::vector<double> cost_;
  std::vector<int> nearest_;
  std::vector<int> second_;
  std::vector<char> is_open_;
  std::vector<int> active_;
  std::vector<int> open_;
  double current_ = std::numeric_limits<double>::infinity();
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline void finish(HeuristicResult& res, const RkmInstance& inst, std::vector<int> open,
                   Clock::time_point start) {
  std::sort(open.begin(), open.end());
  res.solution.open = std::move(open);
  res.objective = eval_objective(inst, res.solution).value;
  res.wall_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

inline void require_valid(const RkmInstance& inst) {
  if (inst.k < 1 || inst.k > inst.n_facilities()) {
    fail(ErrorKind::Parameter, "k must lie in [1, n_facilities]");
  }
}

} // namespace detail

/// Opens, k times, the site whose addition gives the smallest objective (the
/// empty solution counts as +inf). Ties go to the lowest site index.
inline HeuristicResult greedy_up(const RkmInstance& inst) {
  detail::require_valid(inst);
  const auto start = detail::Clock::now();
  const DistanceTable dist(inst);
  HeuristicResult res;
  res.solver = "greedy_up";

  std::vector<double> current(static_cast<std::size_t>(inst.n_clients()),
                              std::numeric_limits<double>::infinity());
  std::vector<char> opened(static_cast<std::size_t>(inst.n_facilities()), 0);
  std::vector<int> open;
  for (int step = 0; step < inst.k; ++step) {
    int best_site = -1;
    double best_value = std::numeric_limits<double>::infinity();
    for (int s = 0; s < inst.n_facilities(); ++s) {
      if (opened[static_cast<std::size_t>(s)]) {
        continue;
      }
      double worst = 0.0;
      for (const auto& g : inst.groups) {
        double sum = 0.0;
        for (int c : g) {
          sum += std::min(current[static_cast<std::size_t>(c)], dist(c, s));
        }
        worst = std::max(worst, sum);
      }
      if (best_site < 0 || worst < best_value) {
        best_site = s;
        best_value = worst;
      }
    }
    opened[static_cast<std::size_t>(best_site)] = 1;
    open.push_back(best_site);
    for (int c = 0; c < inst.n_clients(); ++c) {
      current[static_cast<std::size_t>(c)] = std::min(current[static_cast<std::size_t>(c)], dist(c, best_site));
    }
    res.trace.push_back(best_value);
    ++res.iterations;
  }
  detail::finish(res, inst, std::move(open), start);
  return res;
}

/// Starts with every site open and closes, n_f - k times, the site whose
/// removal gives the smallest objective. Ties go to the lowest site index.
inline HeuristicResult greedy_down(const RkmInstance& inst) {
  detail::require_valid(inst);
  const auto start = detail::Clock::now();
  const DistanceTable dist(inst);
  HeuristicResult res;
  res.solver = "greedy_down";

  std::vector<int> all(static_cast<std::size_t>(inst.n_facilities()));
  std::iota(all.begin(), all.end(), 0);
  SwapEvaluator eval(dist, inst.groups);
  eval.reset(all);
  res.trace.push_back(eval.current());
  while (static_cast<int>(eval.open().size()) > inst.k) {
    int best_site = -1;
    double best_value = std::numeric_limits<double>::infinity();
    for (int s : eval.open()) {
      const int close[] = {s};
      const double v = eval.evaluate(close, {}, best_site < 0 ? std::numeric_limits<double>::infinity() : best_value);
      if (best_site < 0 || v < best_value) {
        best_site = s;
        best_value = v;
      }
    }
    const int close[] = {best_site};
    eval.apply(close, {});
    res.trace.push_back(eval.current());
    ++res.iterations;
  }
  detail::finish(res, inst, eval.open(), start);
  return res;
}

namespace detail {

/// Best strict improvement over the full 1..ell swap neighborhood, scanning
/// swap size ascending, then closed-set and opened-set combinations in
/// lexicographic order; the first minimum wins.
struct SwapMove {
  std::vector<int> close;
  std::vector<int> add;
  double value = std::numeric_limits<double>::infinity();
};

inline SwapMove best_swap(const SwapEvaluator& eval, int n_sites, int ell) {
  const auto& open = eval.open();
  std::vector<int> closed;
  for (int s = 0; s < n_sites; ++s) {
    if (!eval.is_open(s)) {
      closed.push_back(s);
    }
  }
  SwapMove best;
  const int max_size = std::min({ell, static_cast<int>(open.size()), static_cast<int>(closed.size())});
  std::vector<int> close_sites;
  std::vector<int> add_sites;
  for (int size = 1; size <= max_size; ++size) {
    for_each_combination(static_cast<int>(open.size()), size, [&](const std::vector<int>& ci) {
      close_sites.resize(ci.size());
      for (std::size_t i = 0; i < ci.size(); ++i) {
        close_sites[i] = open[static_cast<std::size_t>(ci[i])];
      }
      for_each_combination(static_cast<int>(closed.size()), size, [&](const std::vector<int>& ai) {
        add_sites.resize(ai.size());
        for (std::size_t i = 0; i < ai.size(); ++i) {
          add_sites[i] = closed[static_cast<std::size_t>(ai[i])];
        }
        const double v = eval.evaluate(close_sites, add_sites, best.value);
        if (v < best.value) {
          best.value = v;
          best.close = close_sites;
          best.add = add_sites;
        }
      });
    });
  }
  return best;
}

} // namespace detail

/// Steepest descent over swaps of size 1..ell from k sites drawn uniformly at
/// random; stops when no swap improves by more than kImproveTol.
inline HeuristicResult local_search(const RkmInstance& inst, const HeuristicConfig& cfg) {
  detail::require_valid(inst);
  if (auto v = validate_config(cfg); !v.empty()) {
    fail(ErrorKind::Parameter, "invalid heuristic config: " + v.front());
  }
  const auto start = detail::Clock::now();
  const DistanceTable dist(inst);
  HeuristicResult res;
  res.solver = "local_search";
  res.seed = cfg.seed;

  Rng rng(cfg.seed);
  SwapEvaluator eval(dist, inst.groups);
  eval.reset(rng.sample_without_replacement(inst.n_facilities(), inst.k));
  res.trace.push_back(eval.current());
  while (true) {
    const auto move = detail::best_swap(eval, inst.n_facilities(), cfg.ell);
    if (!(move.value < eval.current() - kImproveTol)) {
      break;
    }
    eval.apply(move.close, move.add);
    res.trace.push_back(eval.current());
    ++res.iterations;
  }
  detail::finish(res, inst, eval.open(), start);
  return res;
}

/// Per round, draws cfg.samples neighbors (swap size uniform in 1..ell, then
/// a uniform swap of that size) and moves to the best one if it strictly
/// improves; stops after cfg.stall_rounds consecutive rounds without a move.
inline HeuristicResult randomized_local_search(const RkmInstance& inst, const HeuristicConfig& cfg) {
  detail::require_valid(inst);
  if (auto v = validate_config(cfg); !v.empty()) {
    fail(ErrorKind::Parameter, "invalid heuristic config: " + v.front());
  }
  const auto start = detail::Clock::now();
  const DistanceTable dist(inst);
  HeuristicResult res;
  res.solver = "randomized_local_search";
  res.seed = cfg.seed;

  Rng rng(cfg.seed);
  SwapEvaluator eval(dist, inst.groups);
  eval.reset(rng.sample_without_replacement(inst.n_facilities(), inst.k));
  res.trace.push_back(eval.current());

  const int n_closed = inst.n_facilities() - inst.k;
  const int max_size = std::min({cfg.ell, inst.k, n_closed});
  if (max_size < 1) {
    detail::finish(res, inst, eval.open(), start);
    return res;
  }

  int stall = 0;
  std::vector<int> closed;
  std::vector<int> close_sites;
  std::vector<int> add_sites;
  while (stall < cfg.stall_rounds) {
    closed.clear();
    for (int s = 0; s < inst.n_facilities(); ++s) {
      if (!eval.is_open(s)) {
        closed.push_back(s);
      }
    }
    const auto& open = eval.open();
    detail::SwapMove best;
    for (int i = 0; i < cfg.samples; ++i) {
      const int size = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_size)));
      const auto ci = rng.sample_without_replacement(static_cast<int>(open.size()), size);
      const auto ai = rng.sample_without_replacement(static_cast<int>(closed.size()), size);
      close_sites.clear();
      add_sites.clear();
      for (int x : ci) {
        close_sites.push_back(open[static_cast<std::size_t>(x)]);
      }
      for (int x : ai) {
        add_sites.push_back(closed[static_cast<std::size_t>(x)]);
      }
      const double v = eval.evaluate(close_sites, add_sites, best.value);
      if (v < best.value) {
        best.value = v;
        best.close = close_sites;
        best.add = add_sites;
      }
    }
    ++res.iterations;
    if (best.value < eval.current() - kImproveTol) {
      eval.apply(best.close, best.add);
      res.trace.push_back(eval.current());
      stall = 0;
    } else {
      ++stall;
    }
  }
  detail::finish(res, inst, eval.open(), start);
  return res;
}

} // namespace rkm
