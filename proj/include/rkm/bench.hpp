#pragma once

// Benchmark sweeps: generate instances, solve the LP relaxation and every
// configured solver, and report performance ratios objective / LP.
//
// Seeds: instance seed = derive_seed(derive_seed(derive_seed(master, family),
// size cell), instance); solver seed = derive_seed(instance seed, 1 + solver).
// Family and solver enter by their fixed enum value, not by position in the
// config, so adding a solver leaves the other records unchanged.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rkm/core.hpp"
#include "rkm/error.hpp"
#include "rkm/exact.hpp"
#include "rkm/generators.hpp"
#include "rkm/heuristics.hpp"
#include "rkm/io.hpp"
#include "rkm/relaxations.hpp"
#include "rkm/rng.hpp"
#include "rkm/simplex.hpp"

namespace rkm {

enum class Solver { GreedyUp, GreedyDown, LocalSearch, RandomizedLocalSearch, BruteForce, BranchAndBound };

inline const char* to_string(Solver s) noexcept {
  switch (s) {
  case Solver::GreedyUp:
    return "greedy_up";
  case Solver::GreedyDown:
    return "greedy_down";
  case Solver::LocalSearch:
    return "local_search";
  case Solver::RandomizedLocalSearch:
    return "randomized_local_search";
  case Solver::BruteForce:
    return "brute_force";
  default:
    return "branch_and_bound";
  }
}

inline std::optional<Solver> parse_solver(const std::string& s) {
  for (auto v : {Solver::GreedyUp, Solver::GreedyDown, Solver::LocalSearch, Solver::RandomizedLocalSearch,
                 Solver::BruteForce, Solver::BranchAndBound}) {
    if (s == to_string(v)) {
      return v;
    }
  }
  return std::nullopt;
}

struct SolveOutcome {
  double objective = 0.0;
  FacilitySolution solution;
  long iterations = 0;
  double wall_time_ms = 0.0;
};

/// Runs one solver. `cfg.seed` is used by the seeded solvers only.
inline SolveOutcome run_solver(Solver s, const RkmInstance& inst, const HeuristicConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SolveOutcome out;
  auto take = [&](const HeuristicResult& r) {
    out.objective = r.objective;
    out.solution = r.solution;
    out.iterations = r.iterations;
  };
  switch (s) {
  case Solver::GreedyUp:
    take(greedy_up(inst));
    break;
  case Solver::GreedyDown:
    take(greedy_down(inst));
    break;
  case Solver::LocalSearch:
    take(local_search(inst, cfg));
    break;
  case Solver::RandomizedLocalSearch:
    take(randomized_local_search(inst, cfg));
    break;
  case Solver::BruteForce: {
    auto r = brute_force_rkm(inst);
    out.objective = r.opt_value;
    out.solution = r.witness;
    out.iterations = r.nodes_explored;
    break;
  }
  case Solver::BranchAndBound: {
    auto r = branch_and_bound(inst);
    out.objective = r.opt_value;
    out.solution = r.witness;
    out.iterations = r.nodes_explored;
    break;
  }
  }
  out.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

struct RunRecord {
  std::string instance_id;
  std::string family;
  int n_facilities = 0;
  int n_clients = 0;
  int n_groups = 0;
  int k = 0;
  std::string solver;
  std::uint64_t seed = 0;
  double objective = 0.0;
  std::optional<double> lp_value; // empty when the LP failed
  std::optional<double> ratio;    // empty when the LP failed or lp_value <= 1e-9
  std::optional<double> wall_time_ms;
  long iterations = 0;
  bool operator==(const RunRecord&) const = default;
};

inline constexpr double kZeroLp = 1e-9;
inline constexpr double kRatioFilter = 1e-6;

inline std::optional<double> performance_ratio(double objective, std::optional<double> lp) {
  if (!lp || *lp <= kZeroLp) {
    return std::nullopt;
  }
  return objective / *lp;
}

// ---- CSV --------------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "instance_id,family,n_facilities,n_clients,n_groups,k,solver,seed,objective,lp_value,ratio,wall_time_ms,iterations";

inline void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kCsvHeader << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : records) {
    out << r.instance_id << ',' << r.family << ',' << r.n_facilities << ',' << r.n_clients << ',' << r.n_groups
        << ',' << r.k << ',' << r.solver << ',' << r.seed << ',' << format_double(r.objective) << ','
        << opt(r.lp_value) << ',' << opt(r.ratio) << ',' << opt(r.wall_time_ms) << ',' << r.iterations << '\n';
  }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

inline std::vector<RunRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != split_csv_line(kCsvHeader)) {
    fail(ErrorKind::Data, "line 1: expected header \"" + std::string(kCsvHeader) + "\"");
  }
  std::vector<RunRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    const auto f = split_csv_line(line);
    const std::string at = "line " + std::to_string(lineno);
    if (f.size() != 13) {
      fail(ErrorKind::Data, at + ": expected 13 fields, found " + std::to_string(f.size()));
    }
    auto num = [&](const std::string& s, const char* col) {
      double v = 0.0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail(ErrorKind::Data, at + ", " + col + ": not a number: \"" + s + "\"");
      }
      return v;
    };
    auto integer = [&](const std::string& s, const char* col) {
      long long v = 0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail(ErrorKind::Data, at + ", " + col + ": not an integer: \"" + s + "\"");
      }
      return v;
    };
    auto opt = [&](const std::string& s, const char* col) -> std::optional<double> {
      if (s.empty()) {
        return std::nullopt;
      }
      return num(s, col);
    };
    RunRecord r;
    r.instance_id = f[0];
    r.family = f[1];
    r.n_facilities = static_cast<int>(integer(f[2], "n_facilities"));
    r.n_clients = static_cast<int>(integer(f[3], "n_clients"));
    r.n_groups = static_cast<int>(integer(f[4], "n_groups"));
    r.k = static_cast<int>(integer(f[5], "k"));
    r.solver = f[6];
    {
      std::uint64_t s = 0;
      const auto res = std::from_chars(f[7].data(), f[7].data() + f[7].size(), s);
      if (res.ec != std::errc() || res.ptr != f[7].data() + f[7].size()) {
        fail(ErrorKind::Data, at + ", seed: not an unsigned integer");
      }
      r.seed = s;
    }
    r.objective = num(f[8], "objective");
    r.lp_value = opt(f[9], "lp_value");
    r.ratio = opt(f[10], "ratio");
    r.wall_time_ms = opt(f[11], "wall_time_ms");
    r.iterations = static_cast<long>(integer(f[12], "iterations"));
    out.push_back(std::move(r));
  }
  return out;
}

inline Json record_to_json(const RunRecord& r) {
  Json j;
  j["instance_id"] = r.instance_id;
  j["family"] = r.family;
  j["n_facilities"] = r.n_facilities;
  j["n_clients"] = r.n_clients;
  j["n_groups"] = r.n_groups;
  j["k"] = r.k;
  j["solver"] = r.solver;
  j["seed"] = r.seed;
  j["objective"] = r.objective;
  j["lp_value"] = r.lp_value ? Json(*r.lp_value) : Json();
  j["ratio"] = r.ratio ? Json(*r.ratio) : Json();
  j["wall_time_ms"] = r.wall_time_ms ? Json(*r.wall_time_ms) : Json();
  j["iterations"] = r.iterations;
  return j;
}

inline Json records_to_json(const std::vector<RunRecord>& records) {
  auto j = io_detail::header("run_records");
  Json arr = Json::array();
  for (const auto& r : records) {
    arr.push_back(record_to_json(r));
  }
  j["records"] = std::move(arr);
  return j;
}

inline std::vector<RunRecord> records_from_json(const Json& j) {
  using namespace io_detail;
  check_header(j, "run_records");
  const auto& arr = as_array(field(j, "", "records"), "records");
  std::vector<RunRecord> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto p = child("records", i);
    const auto& rj = arr[i];
    auto str = [&](const char* key) {
      const auto& v = field(rj, p, key);
      if (!v.is_string()) {
        schema_error(child(p, key), "expected a string");
      }
      return v.get<std::string>();
    };
    auto opt = [&](const char* key) -> std::optional<double> {
      const auto& v = field(rj, p, key);
      if (v.is_null()) {
        return std::nullopt;
      }
      return as_double(v, child(p, key));
    };
    RunRecord r;
    r.instance_id = str("instance_id");
    r.family = str("family");
    r.n_facilities = as_int32(field(rj, p, "n_facilities"), child(p, "n_facilities"));
    r.n_clients = as_int32(field(rj, p, "n_clients"), child(p, "n_clients"));
    r.n_groups = as_int32(field(rj, p, "n_groups"), child(p, "n_groups"));
    r.k = as_int32(field(rj, p, "k"), child(p, "k"));
    r.solver = str("solver");
    const auto& seed = field(rj, p, "seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      schema_error(child(p, "seed"), "expected an unsigned integer");
    }
    r.seed = seed.get<std::uint64_t>();
    r.objective = as_double(field(rj, p, "objective"), child(p, "objective"));
    r.lp_value = opt("lp_value");
    r.ratio = opt("ratio");
    r.wall_time_ms = opt("wall_time_ms");
    r.iterations = static_cast<long>(as_int(field(rj, p, "iterations"), child(p, "iterations")));
    out.push_back(std::move(r));
  }
  return out;
}

// ---- Summaries --------------------------------------------------------------

struct SummaryRow {
  std::string family;
  std::string solver;
  int records = 0;
  int used = 0;           // ratio > 1 + 1e-6
  int filtered_out = 0;   // ratio <= 1 + 1e-6
  int zero_lp = 0;        // lp_value <= 1e-9
  int lp_failed = 0;      // no lp_value
  std::optional<double> mean_ratio;
  std::optional<double> median_ratio;
};

/// Mean and median ratio per (family, solver) over records whose ratio
/// exceeds 1 + 1e-6; rows are ordered by family, then solver name.
inline std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
  std::map<std::pair<std::string, std::string>, std::pair<SummaryRow, std::vector<double>>> cells;
  for (const auto& r : records) {
    auto& [row, ratios] = cells[{r.family, r.solver}];
    row.family = r.family;
    row.solver = r.solver;
    ++row.records;
    if (!r.lp_value) {
      ++row.lp_failed;
    } else if (*r.lp_value <= kZeroLp || !r.ratio) {
      ++row.zero_lp;
    } else if (*r.ratio > 1.0 + kRatioFilter) {
      ++row.used;
      ratios.push_back(*r.ratio);
    } else {
      ++row.filtered_out;
    }
  }
  std::vector<SummaryRow> out;
  for (auto& [key, cell] : cells) {
    auto& [row, ratios] = cell;
    if (!ratios.empty()) {
      double sum = 0.0;
      for (double v : ratios) {
        sum += v;
      }
      row.mean_ratio = sum / static_cast<double>(ratios.size());
      std::sort(ratios.begin(), ratios.end());
      const std::size_t n = ratios.size();
      row.median_ratio = n % 2 == 1 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
    }
    out.push_back(row);
  }
  return out;
}

inline void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "family,solver,records,used,filtered_out,zero_lp,lp_failed,mean_ratio,median_ratio\n";
  for (const auto& r : rows) {
    out << r.family << ',' << r.solver << ',' << r.records << ',' << r.used << ',' << r.filtered_out << ','
        << r.zero_lp << ',' << r.lp_failed << ',' << (r.mean_ratio ? format_double(*r.mean_ratio) : "") << ','
        << (r.median_ratio ? format_double(*r.median_ratio) : "") << '\n';
  }
}

// ---- Sweeps -----------------------------------------------------------------

struct SizeCell {
  int n_facilities = 30;
  int n_groups = 10;
  int clients_per_group = 10;
  double mean_clients_per_group = 10;
  int k = 7;
};

struct BenchConfig {
  std::vector<Family> families{Family::Uniform};
  std::vector<SizeCell> sizes{SizeCell{}};
  std::vector<Solver> solvers{Solver::GreedyUp, Solver::GreedyDown, Solver::LocalSearch,
                              Solver::RandomizedLocalSearch};
  int instances_per_cell = 10;
  std::uint64_t master_seed = 0;
  HeuristicConfig heuristics{};
  int threads = 1;
  bool timing = false; // fill wall_time_ms (makes output run-dependent)
};

struct BenchResult {
  std::vector<RunRecord> records;
  std::vector<SummaryRow> summary;
};

inline std::vector<std::string> validate_bench_config(const BenchConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.families.empty()) {
    out.push_back("no families configured");
  }
  if (cfg.sizes.empty()) {
    out.push_back("no size cells configured");
  }
  if (cfg.solvers.empty()) {
    out.push_back("no solvers configured");
  }
  if (cfg.instances_per_cell < 1) {
    out.push_back("instances_per_cell must be at least 1");
  }
  if (cfg.threads < 1) {
    out.push_back("threads must be at least 1");
  }
  for (const auto& e : validate_config(cfg.heuristics)) {
    out.push_back(e);
  }
  return out;
}

inline GenSpec cell_spec(Family f, const SizeCell& c, std::uint64_t seed) {
  GenSpec s;
  s.family = f;
  s.n_facilities = c.n_facilities;
  s.n_groups = c.n_groups;
  s.clients_per_group = c.clients_per_group;
  s.mean_clients_per_group = c.mean_clients_per_group;
  s.k = c.k;
  s.seed = seed;
  return s;
}

inline std::uint64_t bench_instance_seed(std::uint64_t master, Family f, std::size_t size_index, int instance) {
  return derive_seed(derive_seed(derive_seed(master, static_cast<std::uint64_t>(f)), size_index),
                     static_cast<std::uint64_t>(instance));
}

inline std::uint64_t bench_solver_seed(std::uint64_t instance_seed, Solver s) {
  return derive_seed(instance_seed, 1 + static_cast<std::uint64_t>(s));
}

/// Records come out in (family, size cell, instance, solver) config order
/// regardless of thread count. An LP failure leaves lp_value and ratio empty.
inline BenchResult run_benchmark(const BenchConfig& cfg,
                                 const std::function<void(int done, int total)>& progress = {}) {
  if (auto v = validate_bench_config(cfg); !v.empty()) {
    fail(ErrorKind::Parameter, "invalid benchmark config: " + v.front());
  }
  for (const auto& c : cfg.sizes) {
    for (Family f : cfg.families) {
      if (auto v = validate_spec(cell_spec(f, c, 0)); !v.empty()) {
        fail(ErrorKind::Parameter, "invalid size cell: " + v.front());
      }
    }
  }
  struct Job {
    Family family;
    std::size_t size_index;
    int instance;
  };
  std::vector<Job> jobs;
  for (Family f : cfg.families) {
    for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
      for (int i = 0; i < cfg.instances_per_cell; ++i) {
        jobs.push_back({f, si, i});
      }
    }
  }
  std::vector<std::vector<RunRecord>> slots(jobs.size());
  std::vector<std::string> errors(jobs.size());

  auto work = [&](std::size_t ji) {
    const auto& job = jobs[ji];
    const auto seed = bench_instance_seed(cfg.master_seed, job.family, job.size_index, job.instance);
    const auto gen = generate(cell_spec(job.family, cfg.sizes[job.size_index], seed));
    const auto& inst = gen.instance;
    std::optional<double> lp_value;
    try {
      const auto lp = solve_lp(build_rkm_lp(inst));
      if (lp.status == LpStatus::Optimal) {
        lp_value = lp.objective;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Numerical) {
        throw;
      }
    }
    std::string id = std::string(to_string(job.family)) + "-c" + std::to_string(job.size_index) + "-i" +
                     std::to_string(job.instance);
    for (Solver s : cfg.solvers) {
      auto hc = cfg.heuristics;
      hc.seed = bench_solver_seed(seed, s);
      const auto out = run_solver(s, inst, hc);
      RunRecord r;
      r.instance_id = id;
      r.family = to_string(job.family);
      r.n_facilities = inst.n_facilities();
      r.n_clients = inst.n_clients();
      r.n_groups = inst.n_groups();
      r.k = inst.k;
      r.solver = to_string(s);
      r.seed = hc.seed;
      r.objective = out.objective;
      r.lp_value = lp_value;
      r.ratio = performance_ratio(out.objective, lp_value);
      if (cfg.timing) {
        r.wall_time_ms = out.wall_time_ms;
      }
      r.iterations = out.iterations;
      slots[ji].push_back(std::move(r));
    }
  };

  const int total = static_cast<int>(jobs.size());
  if (cfg.threads == 1) {
    for (std::size_t ji = 0; ji < jobs.size(); ++ji) {
      work(ji);
      if (progress) {
        progress(static_cast<int>(ji) + 1, total);
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<int> done{0};
    std::mutex progress_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < cfg.threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t ji = next++; ji < jobs.size(); ji = next++) {
          try {
            work(ji);
          } catch (const std::exception& e) {
            errors[ji] = e.what();
          }
          const int d = ++done;
          if (progress) {
            std::lock_guard lock(progress_mutex);
            progress(d, total);
          }
        }
      });
    }
    for (auto& th : pool) {
      th.join();
    }
    for (const auto& e : errors) {
      if (!e.empty()) {
        fail(ErrorKind::Data, "benchmark job failed: " + e);
      }
    }
  }
  BenchResult res;
  for (auto& s : slots) {
    for (auto& r : s) {
      res.records.push_back(std::move(r));
    }
  }
  res.summary = summarize(res.records);
  return res;
}

} // namespace rkm
