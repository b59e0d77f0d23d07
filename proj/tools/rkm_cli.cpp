// rkm: command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rkm/bench.hpp"
#include "rkm/core.hpp"
#include "rkm/exact.hpp"
#include "rkm/generators.hpp"
#include "rkm/heuristics.hpp"
#include "rkm/io.hpp"
#include "rkm/label_cover.hpp"
#include "rkm/lc_reduction.hpp"
#include "rkm/mcsp.hpp"
#include "rkm/partition_system.hpp"
#include "rkm/relaxations.hpp"
#include "rkm/sat_to_lc.hpp"
#include "rkm/simplex.hpp"
#include "rkm/wilcoxon.hpp"

namespace {

using namespace rkm;

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string format; // empty: csv for bench, json elsewhere
  int threads = 1;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
  } else {
    write_text_file(g.out, text);
  }
}

std::string with_suffix(const std::string& prefix, const std::string& suffix) { return prefix + suffix; }

/// Loads an RKM instance, converting MCSP documents through the uniform-metric
/// reduction.
RkmInstance load_instance(const std::string& path) {
  const auto j = read_json_file(path);
  if (j.is_object() && j.contains("type") && j["type"] == "mcsp") {
    return mcsp_to_rkm(mcsp_from_json(j));
  }
  return instance_from_json(j);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    if (!cur.empty()) {
      out.push_back(cur);
    }
  }
  return out;
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string family = "uniform";
  GenSpec spec;
};

void cmd_generate(const Globals& g, GenerateArgs a) {
  const auto fam = parse_family(a.family);
  if (!fam) {
    throw UsageError("unknown family \"" + a.family + "\"");
  }
  a.spec.family = *fam;
  a.spec.seed = g.seed;
  if (auto v = validate_spec(a.spec); !v.empty()) {
    throw UsageError(v.front());
  }
  const auto gen = generate(a.spec);
  emit(g, dump(instance_to_json(gen.instance, generator_metadata(gen))));
}

// ---- solve ------------------------------------------------------------------

struct SolveArgs {
  std::string instance;
  std::vector<std::string> solvers{"local_search"};
  HeuristicConfig cfg;
  bool with_lp = false;
  bool timing = false;
};

void cmd_solve(const Globals& g, const SolveArgs& a) {
  const auto inst = load_instance(a.instance);
  if (auto v = validate_instance(inst, {false}); !v.empty()) {
    fail(ErrorKind::Data, "invalid instance: " + v.front());
  }
  std::optional<double> lp;
  if (a.with_lp) {
    const auto sol = solve_lp(build_rkm_lp(inst));
    if (sol.status == LpStatus::Optimal) {
      lp = sol.objective;
    }
  }
  std::vector<RunRecord> records;
  for (const auto& name : a.solvers) {
    const auto s = parse_solver(name);
    if (!s) {
      throw UsageError("unknown solver \"" + name + "\"");
    }
    auto cfg = a.cfg;
    cfg.seed = g.seed;
    const auto out = run_solver(*s, inst, cfg);
    RunRecord r;
    r.instance_id = a.instance;
    r.family = "file";
    r.n_facilities = inst.n_facilities();
    r.n_clients = inst.n_clients();
    r.n_groups = inst.n_groups();
    r.k = inst.k;
    r.solver = name;
    r.seed = g.seed;
    r.objective = out.objective;
    r.lp_value = lp;
    r.ratio = performance_ratio(out.objective, lp);
    if (a.timing) {
      r.wall_time_ms = out.wall_time_ms;
    }
    r.iterations = out.iterations;
    records.push_back(r);
    std::cerr << name << ": objective " << format_double(out.objective) << ", open sites";
    for (int site : out.solution.open) {
      std::cerr << ' ' << site;
    }
    std::cerr << '\n';
  }
  if (g.format == "csv") {
    std::ostringstream os;
    write_csv(os, records);
    emit(g, os.str());
  } else {
    emit(g, dump(records_to_json(records)));
  }
}

// ---- lp ---------------------------------------------------------------------

struct LpArgs {
  std::string input;
  std::string export_lp;
  bool post_process = false;
};

int cmd_lp(const Globals& g, const LpArgs& a) {
  const auto j = read_json_file(a.input);
  LpModel model;
  std::optional<RkmInstance> inst;
  if (j.is_object() && j.contains("type") && j["type"] == "mcsp") {
    const auto m = mcsp_from_json(j);
    if (auto v = validate_mcsp(m); !v.empty()) {
      fail(ErrorKind::Data, "invalid MCSP instance: " + v.front());
    }
    model = build_mcsp_lp(m);
  } else {
    inst = instance_from_json(j);
    if (auto v = validate_instance(*inst, {false}); !v.empty()) {
      fail(ErrorKind::Data, "invalid instance: " + v.front());
    }
    model = build_rkm_lp(*inst);
  }
  if (!a.export_lp.empty()) {
    std::ostringstream os;
    write_lp_format(os, model);
    write_text_file(a.export_lp, os.str());
  }
  auto sol = solve_lp(model);
  if (sol.status == LpStatus::Optimal && a.post_process && inst) {
    sol.values = nearest_first_assignment(*inst, sol.values);
  }
  std::cout << "status " << to_string(sol.status) << '\n';
  if (sol.status == LpStatus::Optimal) {
    std::cout << "lp_value " << format_double(sol.objective) << '\n';
  }
  if (!g.out.empty()) {
    write_text_file(g.out, dump(lp_solution_to_json(model, sol)));
  }
  return sol.status == LpStatus::Optimal ? 0 : 3;
}

// ---- exact ------------------------------------------------------------------

struct ExactArgs {
  std::string instance;
  std::string method = "brute_force";
  long budget = 100'000;
};

void cmd_exact(const Globals& g, const ExactArgs& a) {
  const auto inst = load_instance(a.instance);
  if (auto v = validate_instance(inst, {false}); !v.empty()) {
    fail(ErrorKind::Data, "invalid instance: " + v.front());
  }
  ExactResult res;
  if (a.method == "brute_force") {
    res = brute_force_rkm(inst);
  } else if (a.method == "branch_and_bound") {
    BranchAndBoundOptions opt;
    opt.node_budget = a.budget;
    res = branch_and_bound(inst, opt);
  } else {
    throw UsageError("unknown method \"" + a.method + "\"");
  }
  const auto lp = solve_lp(build_rkm_lp(inst));
  std::cout << "opt " << format_double(res.opt_value) << '\n';
  if (lp.status == LpStatus::Optimal) {
    std::cout << "lp " << format_double(lp.objective) << '\n';
  }
  std::cout << "proved_optimal " << (res.proved_optimal ? "true" : "false") << '\n';
  for (const auto& w : res.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  auto j = io_detail::header("exact_result");
  j["method"] = a.method;
  j["opt_value"] = res.opt_value;
  j["witness"] = res.witness.open;
  j["nodes_explored"] = res.nodes_explored;
  j["proved_optimal"] = res.proved_optimal;
  j["lp_value"] = lp.status == LpStatus::Optimal ? Json(lp.objective) : Json();
  j["warnings"] = res.warnings;
  if (!g.out.empty()) {
    write_text_file(g.out, dump(j));
  }
}

// ---- bench ------------------------------------------------------------------

struct BenchArgs {
  std::string families = "uniform";
  std::string solvers = "greedy_up,greedy_down,local_search,randomized_local_search";
  SizeCell size;
  int instances = 10;
  HeuristicConfig cfg;
  std::string summary;
  bool timing = false;
  bool quiet = false;
};

void cmd_bench(const Globals& g, const BenchArgs& a) {
  BenchConfig cfg;
  cfg.families.clear();
  for (const auto& f : split_list(a.families)) {
    const auto fam = parse_family(f);
    if (!fam) {
      throw UsageError("unknown family \"" + f + "\"");
    }
    cfg.families.push_back(*fam);
  }
  cfg.solvers.clear();
  for (const auto& s : split_list(a.solvers)) {
    const auto sol = parse_solver(s);
    if (!sol) {
      throw UsageError("unknown solver \"" + s + "\"");
    }
    cfg.solvers.push_back(*sol);
  }
  cfg.sizes = {a.size};
  cfg.instances_per_cell = a.instances;
  cfg.master_seed = g.seed;
  cfg.heuristics = a.cfg;
  cfg.threads = g.threads;
  cfg.timing = a.timing;
  if (auto v = validate_bench_config(cfg); !v.empty()) {
    throw UsageError(v.front());
  }
  std::function<void(int, int)> progress;
  if (!a.quiet) {
    progress = [](int done, int total) { std::cerr << "\r" << done << "/" << total << " instances" << std::flush; };
  }
  const auto res = run_benchmark(cfg, progress);
  if (!a.quiet) {
    std::cerr << '\n';
  }
  std::ostringstream os;
  if (g.format != "json") {
    write_csv(os, res.records);
  } else {
    os << dump(records_to_json(res.records));
  }
  emit(g, os.str());
  std::ostringstream ss;
  write_summary(ss, res.summary);
  if (a.summary.empty()) {
    std::cerr << ss.str();
  } else {
    write_text_file(a.summary, ss.str());
  }
}

// ---- gadget -----------------------------------------------------------------

struct GadgetArgs {
  int d = 2;
  std::string mcsp_out;
  // label-cover-mcsp
  std::string lc_in;
  std::string labeling_in;
  ToyLabelCoverSpec toy;
  int z_size = 0;
  // line-embedding
  std::string mcsp_in;
  std::string cert_in;
  // sat-to-lc
  std::string cnf_in;
  int r = 2;
  std::string mode = "enumerate";
  long count = 1000;
  // partition-system
  int colors = 4;
  bool hypercube = false;
};

void gadget_integrality_gap(const Globals& g, const GadgetArgs& a) {
  const auto m = build_integrality_gap(a.d);
  if (!a.mcsp_out.empty()) {
    write_text_file(a.mcsp_out, dump(mcsp_to_json(m)));
  }
  emit(g, dump(instance_to_json(mcsp_to_rkm(m))));
}

/// Writes <out>.lc.json, <out>.mcsp.json and <out>.cert.json.
void gadget_label_cover_mcsp(const Globals& g, const GadgetArgs& a) {
  if (g.out.empty()) {
    throw UsageError("label-cover-mcsp needs --out <prefix>");
  }
  LabelCoverInstance lc;
  std::optional<Labeling> lab;
  if (!a.lc_in.empty()) {
    lc = label_cover_from_json(read_json_file(a.lc_in));
    if (!a.labeling_in.empty()) {
      lab = labeling_from_json(read_json_file(a.labeling_in));
    }
  } else {
    auto toy = a.toy;
    toy.seed = g.seed;
    auto planted = planted_label_cover(toy);
    lc = std::move(planted.lc);
    lab = std::move(planted.planted);
  }
  LcReductionOptions opt;
  if (a.z_size > 0) {
    opt.z_size = a.z_size;
  }
  const auto red = lc_to_mcsp(lc, g.seed, opt);
  write_text_file(with_suffix(g.out, ".lc.json"), dump(label_cover_to_json(lc)));
  write_text_file(with_suffix(g.out, ".mcsp.json"), dump(mcsp_to_json(red.mcsp, &red.provenance)));
  std::cout << "sets " << red.mcsp.n_sets() << ", elements " << red.mcsp.m << ", t " << red.mcsp.t
            << ", uncovered elements " << red.uncovered_elements << '\n';
  if (lab) {
    const auto st = satisfaction_stats(lc, *lab);
    Certificate cert;
    cert.witness_selection = witness_from_labeling(red.mcsp, red.provenance, *lab).chosen;
    cert.claimed_congestion = 1;
    cert.claimed_objective = 1.0;
    if (st.strong_fraction < 1.0) {
      std::cout << "labeling strongly satisfies " << st.strong_edges << " of " << lc.n_edges()
                << " edges; no yes-instance certificate written\n";
      return;
    }
    write_text_file(with_suffix(g.out, ".cert.json"), dump(certificate_to_json(cert)));
    write_text_file(with_suffix(g.out, ".labeling.json"), dump(labeling_to_json(*lab)));
  }
}

void gadget_line_embedding(const Globals& g, const GadgetArgs& a) {
  if (a.mcsp_in.empty()) {
    throw UsageError("line-embedding needs --mcsp <file>");
  }
  McspProvenance prov;
  const auto m = mcsp_from_json(read_json_file(a.mcsp_in), &prov);
  const auto line = mcsp_to_line_rkm(m, prov);
  auto meta = Json::object();
  meta["construction"] = "line_embedding";
  meta["block_gap"] = line.embedding.block_gap;
  meta["element_of_group"] = line.element_of_group;
  emit(g, dump(instance_to_json(line.instance, meta)));
}

void gadget_sat_to_lc(const Globals& g, const GadgetArgs& a) {
  if (a.cnf_in.empty()) {
    throw UsageError("sat-to-lc needs --cnf <file>");
  }
  std::ifstream in(a.cnf_in);
  if (!in) {
    fail(ErrorKind::Data, "cannot open " + a.cnf_in);
  }
  const auto f = parse_dimacs(in);
  SatLcOptions opt;
  if (a.mode == "enumerate") {
    opt.mode = SatLcMode::Enumerate;
  } else if (a.mode == "sample") {
    opt.mode = SatLcMode::Sample;
    opt.sample_count = a.count;
    opt.seed = g.seed;
  } else {
    throw UsageError("mode must be enumerate or sample");
  }
  const auto res = sat_to_lc(f, a.r, opt);
  std::cerr << "vertices " << res.lc.n_vertices() << ", edges " << res.lc.n_edges() << ", colors "
            << res.lc.n_colors << '\n';
  emit(g, dump(label_cover_to_json(res.lc)));
}

void gadget_partition_system(const Globals& g, const GadgetArgs& a) {
  PartitionSystem ps;
  if (a.hypercube) {
    ps = hypercube_partition_system(a.r, a.colors);
  } else {
    PartitionBuildOptions opt;
    if (a.z_size > 0) {
      opt.z_size = a.z_size;
    }
    auto built = build_partition_system(a.r, a.colors, g.seed, opt);
    std::cerr << "verified (" << (built.verdict.exhaustive ? "exhaustive" : "sampled") << ", "
              << built.verdict.tuples_checked << " tuples) after " << built.attempts_used << " attempt(s)\n";
    ps = std::move(built.system);
  }
  emit(g, dump(partition_system_to_json(ps)));
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::string mcsp;
  std::string instance;
  std::string cert;
  std::string partition_system;
  std::string mode = "auto";
};

/// Returns the exit code: 0 when every supplied check passes, 2 otherwise.
int cmd_verify(const Globals& g, const VerifyArgs& a) {
  bool ok = true;
  bool checked = false;
  if (!a.partition_system.empty()) {
    checked = true;
    const auto ps = partition_system_from_json(read_json_file(a.partition_system));
    VerifyMode mode = VerifyMode::Auto;
    if (a.mode == "exhaustive") {
      mode = VerifyMode::Exhaustive;
    } else if (a.mode == "sampled") {
      mode = VerifyMode::Sampled;
    } else if (a.mode != "auto") {
      throw UsageError("mode must be auto, exhaustive or sampled");
    }
    const auto v = verify_partition_system(ps, mode, g.seed);
    std::cout << "partition system: " << v.describe() << " (" << (v.exhaustive ? "exhaustive" : "sampled") << ", "
              << v.tuples_checked << " tuples)\n";
    ok = ok && v.ok;
  }
  if (!a.cert.empty()) {
    checked = true;
    const auto cert = certificate_from_json(read_json_file(a.cert));
    if (a.mcsp.empty() && a.instance.empty()) {
      throw UsageError("a certificate needs --mcsp and/or --instance");
    }
    if (!a.mcsp.empty()) {
      const auto m = mcsp_from_json(read_json_file(a.mcsp));
      SetSelection sel{cert.witness_selection};
      std::sort(sel.chosen.begin(), sel.chosen.end());
      const auto c = congestion(m, sel).max_congestion;
      const bool pass = c == cert.claimed_congestion;
      std::cout << (pass ? "ok" : "FAILED") << ", congestion " << c << " (claimed " << cert.claimed_congestion
                << ")\n";
      ok = ok && pass;
    }
    if (!a.instance.empty()) {
      const auto inst = instance_from_json(read_json_file(a.instance));
      const auto open = selection_from_open(inst.n_facilities(), cert.witness_selection);
      const double obj = eval_objective(inst, FacilitySolution{open.chosen}).value;
      const bool pass = !cert.claimed_objective || std::abs(obj - *cert.claimed_objective) <= 1e-9;
      std::cout << (pass ? "ok" : "FAILED") << ", objective of complement facility set " << format_double(obj);
      if (cert.claimed_objective) {
        std::cout << " (claimed " << format_double(*cert.claimed_objective) << ")";
      }
      std::cout << '\n';
      ok = ok && pass;
    }
  }
  if (!checked) {
    throw UsageError("nothing to verify: pass --cert or --partition-system");
  }
  return ok ? 0 : 2;
}

// ---- stats ------------------------------------------------------------------

struct StatsArgs {
  std::string csv;
  std::string solver_a;
  std::string solver_b;
  std::string column = "objective";
  std::string mode = "auto";
};

void cmd_stats(const Globals& g, const StatsArgs& a) {
  std::ifstream in(a.csv);
  if (!in) {
    fail(ErrorKind::Data, "cannot open " + a.csv);
  }
  const auto records = read_csv(in);
  auto value = [&](const RunRecord& r) -> std::optional<double> {
    if (a.column == "objective") {
      return r.objective;
    }
    if (a.column == "ratio") {
      return r.ratio;
    }
    if (a.column == "iterations") {
      return static_cast<double>(r.iterations);
    }
    throw UsageError("column must be objective, ratio or iterations");
  };
  std::map<std::string, double> va;
  std::map<std::string, double> vb;
  for (const auto& r : records) {
    const auto v = value(r);
    if (!v) {
      continue;
    }
    if (r.solver == a.solver_a) {
      va[r.instance_id] = *v;
    } else if (r.solver == a.solver_b) {
      vb[r.instance_id] = *v;
    }
  }
  std::vector<double> xa;
  std::vector<double> xb;
  for (const auto& [id, v] : va) {
    if (const auto it = vb.find(id); it != vb.end()) {
      xa.push_back(v);
      xb.push_back(it->second);
    }
  }
  WilcoxonMode mode = WilcoxonMode::Auto;
  if (a.mode == "exact") {
    mode = WilcoxonMode::Exact;
  } else if (a.mode == "normal") {
    mode = WilcoxonMode::Normal;
  } else if (a.mode != "auto") {
    throw UsageError("mode must be auto, exact or normal");
  }
  const auto w = wilcoxon_signed_rank(xa, xb, mode);
  auto j = io_detail::header("wilcoxon");
  j["column"] = a.column;
  j["solver_a"] = a.solver_a;
  j["solver_b"] = a.solver_b;
  j["pairs"] = xa.size();
  j["nonzero_pairs"] = w.n;
  j["statistic"] = w.statistic;
  j["w_plus"] = w.w_plus;
  j["w_minus"] = w.w_minus;
  j["p_value"] = w.p_value;
  j["method"] = w.exact ? "exact" : "normal";
  emit(g, dump(j));
}

int exit_code(ErrorKind k) {
  switch (k) {
  case ErrorKind::Parameter:
    return 1;
  case ErrorKind::Numerical:
    return 3;
  default:
    return 2;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust k-Median toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed (master seed for bench)");
  app.add_option("--out", g.out, "Output file or prefix (default: stdout)");
  app.add_option("--format", g.format, "Record format (default: csv for bench, json otherwise)")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", g.threads, "Worker threads for bench")->check(CLI::PositiveNumber);

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Generate a random planar instance");
  c_gen->add_option("--family", gen.family, "uniform | gauss_const | gauss_exp");
  c_gen->add_option("--facilities", gen.spec.n_facilities);
  c_gen->add_option("--groups", gen.spec.n_groups);
  c_gen->add_option("--clients-per-group", gen.spec.clients_per_group);
  c_gen->add_option("--mean-clients-per-group", gen.spec.mean_clients_per_group);
  c_gen->add_option("--k", gen.spec.k);

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "Run heuristics or exact solvers on an instance");
  c_solve->add_option("instance", solve.instance)->required();
  c_solve->add_option("--solver", solve.solvers, "Solver name (repeatable)")->delimiter(',');
  c_solve->add_option("--ell", solve.cfg.ell);
  c_solve->add_option("--samples", solve.cfg.samples);
  c_solve->add_option("--stall-rounds", solve.cfg.stall_rounds);
  c_solve->add_flag("--with-lp", solve.with_lp, "Also solve the LP and report ratios");
  c_solve->add_flag("--timing", solve.timing, "Record wall times");

  LpArgs lp;
  auto* c_lp = app.add_subcommand("lp", "Solve the LP relaxation of an instance or MCSP file");
  c_lp->add_option("input", lp.input)->required();
  c_lp->add_option("--export-lp", lp.export_lp, "Write the model in LP text format");
  c_lp->add_flag("--nearest-first", lp.post_process, "Rewrite y nearest-first before writing");

  ExactArgs ex;
  auto* c_exact = app.add_subcommand("exact", "Exact optimum of an instance or MCSP file");
  c_exact->add_option("instance", ex.instance)->required();
  c_exact->add_option("--method", ex.method, "brute_force | branch_and_bound");
  c_exact->add_option("--budget", ex.budget, "Branch-and-bound node budget");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Benchmark sweep with CSV output");
  c_bench->add_option("--families", bench.families, "Comma-separated families");
  c_bench->add_option("--solvers", bench.solvers, "Comma-separated solvers");
  c_bench->add_option("--facilities", bench.size.n_facilities);
  c_bench->add_option("--groups", bench.size.n_groups);
  c_bench->add_option("--clients-per-group", bench.size.clients_per_group);
  c_bench->add_option("--mean-clients-per-group", bench.size.mean_clients_per_group);
  c_bench->add_option("--k", bench.size.k);
  c_bench->add_option("--instances", bench.instances, "Instances per family");
  c_bench->add_option("--ell", bench.cfg.ell);
  c_bench->add_option("--samples", bench.cfg.samples);
  c_bench->add_option("--stall-rounds", bench.cfg.stall_rounds);
  c_bench->add_option("--summary", bench.summary, "Summary CSV file (default: stderr)");
  c_bench->add_flag("--timing", bench.timing, "Fill wall_time_ms (output no longer reproducible)");
  c_bench->add_flag("--quiet", bench.quiet, "No progress output");

  GadgetArgs gad;
  auto* c_gadget = app.add_subcommand("gadget", "Hardness constructions");
  c_gadget->require_subcommand(1);
  auto* g_gap = c_gadget->add_subcommand("integrality-gap", "Integrality-gap family as a uniform instance");
  g_gap->add_option("--d", gad.d)->check(CLI::Range(2, 10));
  g_gap->add_option("--mcsp-out", gad.mcsp_out, "Also write the MCSP form");
  auto* g_lc = c_gadget->add_subcommand("label-cover-mcsp", "Label Cover to MCSP with a yes-instance certificate");
  g_lc->add_option("--lc", gad.lc_in, "Label Cover JSON (default: random planted instance)");
  g_lc->add_option("--labeling", gad.labeling_in, "Labeling JSON for the certificate");
  g_lc->add_option("--r", gad.toy.r);
  g_lc->add_option("--vertices-per-part", gad.toy.vertices_per_part);
  g_lc->add_option("--labels", gad.toy.labels);
  g_lc->add_option("--colors", gad.toy.n_colors);
  g_lc->add_option("--edges", gad.toy.n_edges);
  g_lc->add_option("--z-size", gad.z_size, "Ground set size per edge");
  auto* g_line = c_gadget->add_subcommand("line-embedding", "MCSP with provenance to a line-metric instance");
  g_line->add_option("--mcsp", gad.mcsp_in)->required();
  auto* g_sat = c_gadget->add_subcommand("sat-to-lc", "3SAT (DIMACS) to r-prover Label Cover");
  g_sat->add_option("--cnf", gad.cnf_in)->required();
  g_sat->add_option("--r", gad.r)->check(CLI::IsMember({2, 4, 8}));
  g_sat->add_option("--mode", gad.mode, "enumerate | sample");
  g_sat->add_option("--count", gad.count, "Random strings in sample mode");
  auto* g_ps = c_gadget->add_subcommand("partition-system", "Verified partition system");
  g_ps->add_option("--r", gad.r);
  g_ps->add_option("--colors", gad.colors);
  g_ps->add_option("--z-size", gad.z_size);
  g_ps->add_flag("--hypercube", gad.hypercube, "Deterministic [r]^colors construction");

  VerifyArgs ver;
  auto* c_verify = app.add_subcommand("verify", "Check a certificate or a partition system");
  c_verify->add_option("--cert", ver.cert);
  c_verify->add_option("--mcsp", ver.mcsp);
  c_verify->add_option("--instance", ver.instance);
  c_verify->add_option("--partition-system", ver.partition_system);
  c_verify->add_option("--mode", ver.mode, "auto | exhaustive | sampled");

  StatsArgs st;
  auto* c_stats = app.add_subcommand("stats", "Wilcoxon signed-rank test between two solvers");
  c_stats->add_option("csv", st.csv)->required();
  c_stats->add_option("--a", st.solver_a)->required();
  c_stats->add_option("--b", st.solver_b)->required();
  c_stats->add_option("--column", st.column);
  c_stats->add_option("--mode", st.mode);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*c_gen) {
      cmd_generate(g, gen);
    } else if (*c_solve) {
      cmd_solve(g, solve);
    } else if (*c_lp) {
      return cmd_lp(g, lp);
    } else if (*c_exact) {
      cmd_exact(g, ex);
    } else if (*c_bench) {
      cmd_bench(g, bench);
    } else if (*c_gadget) {
      if (*g_gap) {
        gadget_integrality_gap(g, gad);
      } else if (*g_lc) {
        gadget_label_cover_mcsp(g, gad);
      } else if (*g_line) {
        gadget_line_embedding(g, gad);
      } else if (*g_sat) {
        gadget_sat_to_lc(g, gad);
      } else if (*g_ps) {
        gadget_partition_system(g, gad);
      }
    } else if (*c_verify) {
      return cmd_verify(g, ver);
    } else if (*c_stats) {
      cmd_stats(g, st);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
