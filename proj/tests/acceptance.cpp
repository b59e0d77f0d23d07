// Acceptance runner: one PASS/FAIL line per criterion, exit 1 on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

#include "rkm/bench.hpp"
#include "rkm/exact.hpp"
#include "rkm/io.hpp"
#include "rkm/lc_reduction.hpp"
#include "rkm/partition_system.hpp"
#include "rkm/relaxations.hpp"
#include "rkm/simplex.hpp"
#include "rkm/wilcoxon.hpp"
#include "rational_oracle.hpp"
#include "support.hpp"

using namespace rkm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return format_double(v); }

Outcome integrality_gap() {
  Outcome o{true, ""};
  for (int d : {2, 3}) {
    const auto inst = build_integrality_gap(d);
    const double lp = solve_lp(build_mcsp_lp(inst)).objective;
    const double opt = brute_force_rkm(mcsp_to_rkm(inst)).opt_value;
    o.pass = o.pass && std::abs(lp - 1.0) <= 1e-6 && opt == d;
    o.detail += "d=" + std::to_string(d) + " lp " + fmt(lp) + " opt " + fmt(opt) + "; ";
  }
  return o;
}

Outcome lemma4() {
  Rng rng(4);
  int agree = 0;
  for (int i = 0; i < 100; ++i) {
    const auto inst = test::random_mcsp(rng, 2 + static_cast<int>(rng.below(7)), 2 + static_cast<int>(rng.below(5)));
    const int mcsp = brute_force_mcsp(inst).opt_value;
    const double rkm = brute_force_rkm(mcsp_to_rkm(inst)).opt_value;
    agree += rkm == mcsp;
  }
  return {agree == 100, std::to_string(agree) + "/100 agree"};
}

Outcome partition_systems() {
  Outcome o{true, ""};
  for (int r : {2, 3}) {
    for (int c : {4, 8}) {
      int ok = 0;
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto ps = random_partition_system(r, c, default_z_size(r, c), seed);
        ok += verify_partition_system(ps, VerifyMode::Exhaustive).ok;
      }
      o.pass = o.pass && ok >= 99;
      o.detail += "r=" + std::to_string(r) + " C=" + std::to_string(c) + " " + std::to_string(ok) + "/100; ";
    }
  }
  int degenerate_ok = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    degenerate_ok += verify_partition_system(random_partition_system(2, 4, 1, seed), VerifyMode::Exhaustive).ok;
  }
  o.pass = o.pass && degenerate_ok == 0;
  o.detail += "z=1 passes " + std::to_string(degenerate_ok) + "/20";
  return o;
}

struct ToyLine {
  PlantedLabelCover planted;
  LcReduction red;
  LineReduction line;
};

std::vector<ToyLine> toy_lines() {
  std::vector<ToyLine> out;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ToyLabelCoverSpec s;
    s.r = 2;
    s.n_edges = 1 + static_cast<int>(seed % 4);
    s.vertices_per_part = std::min(2, s.n_edges);
    s.labels = 2;
    s.n_colors = 3;
    s.seed = seed;
    auto p = planted_label_cover(s);
    auto red = lc_to_mcsp(p.lc, 1000 + seed);
    auto line = mcsp_to_line_rkm(red.mcsp, red.provenance);
    out.push_back({std::move(p), std::move(red), std::move(line)});
  }
  return out;
}

Outcome certificates(const std::vector<ToyLine>& toys) {
  int ok = 0;
  for (const auto& t : toys) {
    const auto sel = witness_from_labeling(t.red.mcsp, t.red.provenance, t.planted.planted);
    const int cong = congestion(t.red.mcsp, sel).max_congestion;
    const double obj = eval_objective(t.line.instance, open_from_selection(t.red.mcsp.n_sets(), sel)).value;
    ok += static_cast<int>(sel.chosen.size()) == t.red.mcsp.t && cong == 1 && obj == 1.0;
  }
  return {ok == static_cast<int>(toys.size()), std::to_string(ok) + "/" + std::to_string(toys.size()) +
                                                   " with congestion 1 and line objective 1"};
}

Outcome lemma10(const std::vector<ToyLine>& toys) {
  long checked = 0;
  long violations = 0;
  if (toys.empty()) {
    return {false, "no toy instances"};
  }
  for (const auto& t : toys) {
    const int n = t.red.mcsp.n_sets();
    for_each_combination(n, t.line.instance.k, [&](const std::vector<int>& open) {
      const double obj = eval_objective(t.line.instance, FacilitySolution{open}).value;
      const int cong = congestion(t.red.mcsp, selection_from_open(n, open)).max_congestion;
      ++checked;
      violations += obj < cong - 1e-12;
    });
  }
  return {checked > 0 && violations == 0, std::to_string(checked) + " facility sets, " + std::to_string(violations) + " violations"};
}

Outcome claim8() {
  int ok = 0;
  int total = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    ToyLabelCoverSpec s;
    s.r = 2 + static_cast<int>(seed % 2);
    s.vertices_per_part = 3;
    s.labels = 2;
    s.n_colors = 3;
    s.seed = seed;
    const auto lc = regular_label_cover(s, 2);
    const auto red = lc_to_mcsp(lc, seed);
    Rng rng(80 + seed);
    for (int trial = 0; trial < 50; ++trial) {
      const auto chosen = rng.sample_without_replacement(red.mcsp.n_sets(), red.mcsp.t);
      const auto load = edge_loads(red.mcsp, red.provenance, chosen);
      ok += std::accumulate(load.begin(), load.end(), 0) == lc.r * lc.n_edges();
      ++total;
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " selections sum to r|E|"};
}

Outcome lp_soundness() {
  int sound = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = test::small_planar(static_cast<Family>(seed % 3), 10, 4, 5, 3, 7000 + seed);
    const auto lp = solve_lp(build_rkm_lp(inst));
    const double opt = brute_force_rkm(inst).opt_value;
    sound += lp.status == LpStatus::Optimal && lp.objective <= opt + 1e-6;
  }
  Rng rng(2024);
  int match = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto model = test::random_tiny_lp(rng, 5, 5);
    const auto exact = test::rational_optimum(model);
    const auto sol = solve_lp(model);
    if (!exact) {
      match += sol.status == LpStatus::Infeasible;
    } else {
      match += sol.status == LpStatus::Optimal && std::abs(sol.objective - exact->get_d()) <= 1e-6;
    }
  }
  return {sound == 200 && match == 50,
          "LP <= OPT on " + std::to_string(sound) + "/200, rational oracle match " + std::to_string(match) + "/50"};
}

Outcome rounding() {
  const auto inst = build_integrality_gap(4);
  const auto sol = solve_lp(build_mcsp_lp(inst));
  std::vector<double> total(static_cast<std::size_t>(inst.m), 0.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto cong = congestion_of(inst, round_mcsp(inst, sol.values, seed).drawn.chosen).per_element;
    for (std::size_t e = 0; e < total.size(); ++e) {
      total[e] += cong[e];
    }
  }
  const double worst = *std::max_element(total.begin(), total.end()) / 200.0;
  return {worst <= 2.5 * sol.objective,
          "max mean congestion " + fmt(worst) + " vs 2.5 z_LP = " + fmt(2.5 * sol.objective)};
}

std::optional<double> mean_ratio(const std::vector<SummaryRow>& rows, Solver s) {
  for (const auto& r : rows) {
    if (r.solver == to_string(s)) {
      return r.mean_ratio;
    }
  }
  return std::nullopt;
}

Outcome heuristic_ordering() {
  BenchConfig cfg;
  cfg.solvers = {Solver::GreedyUp, Solver::GreedyDown, Solver::LocalSearch};
  cfg.instances_per_cell = 100;
  cfg.master_seed = 2009;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  cfg.families = {Family::Uniform};
  const auto uni = run_benchmark(cfg).summary;
  cfg.families = {Family::GaussConst};
  const auto gc = run_benchmark(cfg).summary;
  const auto ls = mean_ratio(uni, Solver::LocalSearch);
  const auto gd = mean_ratio(uni, Solver::GreedyDown);
  const auto gu = mean_ratio(uni, Solver::GreedyUp);
  const auto gc_gd = mean_ratio(gc, Solver::GreedyDown);
  const auto gc_gu = mean_ratio(gc, Solver::GreedyUp);
  if (!ls || !gd || !gu || !gc_gd || !gc_gu) {
    return {false, "a mean ratio is missing"};
  }
  const bool pass = *ls < *gd && *gd < *gu && *ls <= 1.4 && *gc_gu >= 1.5 * *gc_gd;
  return {pass, "uniform LS " + fmt(*ls) + " GD " + fmt(*gd) + " GU " + fmt(*gu) + "; gauss_const GD " +
                    fmt(*gc_gd) + " GU " + fmt(*gc_gu)};
}

Outcome oracle_gap() {
  int optimal = 0;
  int within = 0;
  double worst = 1.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = test::small_planar(static_cast<Family>(seed % 3), 12, 5, 8, 4, 9000 + seed);
    const double opt = brute_force_rkm(inst).opt_value;
    HeuristicConfig cfg;
    cfg.seed = seed;
    const double ls = local_search(inst, cfg).objective;
    optimal += ls <= opt + 1e-9 * std::max(1.0, opt);
    within += ls <= 1.5 * opt + 1e-9;
    worst = std::max(worst, opt > 0 ? ls / opt : 1.0);
  }
  return {optimal >= 70 && within == 100, "optimal " + std::to_string(optimal) + "/100, within 1.5x " +
                                              std::to_string(within) + "/100, worst ratio " + fmt(worst)};
}

Outcome wilcoxon() {
  const std::vector<double> a{1, 2, 3, 4, 5, 6};
  const std::vector<double> b{2, 4, 6, 8, 10, 12};
  const double p = wilcoxon_signed_rank(a, b, WilcoxonMode::Exact).p_value;
  Rng rng(15);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x;
    std::vector<double> y;
    const double shift = rng.uniform(-0.5, 0.5);
    for (int i = 0; i < 15; ++i) {
      x.push_back(rng.normal() + shift);
      y.push_back(rng.normal());
    }
    worst = std::max(worst, std::abs(wilcoxon_signed_rank(x, y, WilcoxonMode::Exact).p_value -
                                     wilcoxon_signed_rank(x, y, WilcoxonMode::Normal).p_value));
  }
  return {p == 0.03125 && worst <= 0.01, "exact p " + fmt(p) + ", max |normal - exact| " + fmt(worst)};
}

Outcome determinism() {
  BenchConfig cfg;
  cfg.families = {Family::Uniform, Family::GaussConst, Family::GaussExp};
  cfg.instances_per_cell = 10;
  cfg.master_seed = 77;
  auto csv = [&](int threads) {
    cfg.threads = threads;
    std::ostringstream os;
    write_csv(os, run_benchmark(cfg).records);
    return os.str();
  };
  const auto first = csv(1);
  const auto second = csv(4);
  return {first == second, std::to_string(first.size()) + " bytes, " + (first == second ? "identical" : "differ")};
}

} // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  std::vector<ToyLine> toys;
  const std::vector<Criterion> criteria{
      {"integrality gap d=2,3", 5, integrality_gap},
      {"MCSP / uniform k-median equivalence", 30, lemma4},
      {"partition systems", 60, partition_systems},
      {"yes-instance certificates", 60,
       [&] {
         toys = toy_lines();
         return certificates(toys);
       }},
      {"line objective bounds congestion", 60, [&] { return lemma10(toys); }},
      {"edge load identity", 60, claim8},
      {"LP soundness", 600, lp_soundness},
      {"rounding congestion", 60, rounding},
      {"heuristic ordering", 1200, heuristic_ordering},
      {"local search vs exact", 600, oracle_gap},
      {"Wilcoxon signed-rank", 60, wilcoxon},
      {"bench determinism", 600, determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %s: %s (%.1f s%s)\n", pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
