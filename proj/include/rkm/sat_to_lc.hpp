#pragma once

// r-prover 3SAT -> Hypergraph Label Cover.
//
// A random string picks r clauses C_0..C_{r-1} and in each a literal position,
// which fixes a variable x_j of C_j. Prover i holds row i of the order-r
// Sylvester Hadamard matrix (bit j = popcount(i & j) mod 2) and is asked C_j
// where its bit j is 0 and x_j where it is 1. A prover's answer assigns every
// variable of its query and must satisfy each queried clause. The color of an
// answer is the induced assignment of x_0..x_{r-1}, encoded as sum_j val(x_j) 2^j.
//
// Label sets are padded to the largest answer count in the part by repeating
// the vertex's first answer. A query with no consistent answer (contradictory
// clauses) gets one label whose color 2^r + i is private to part i.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rkm/combinatorics.hpp"
#include "rkm/error.hpp"
#include "rkm/label_cover.hpp"
#include "rkm/rng.hpp"

namespace rkm {

/// 3-CNF over variables 1..n_vars; literals are DIMACS-style signed ints.
struct Cnf {
  int n_vars = 0;
  std::vector<std::array<int, 3>> clauses;
  bool operator==(const Cnf&) const = default;
};

inline std::vector<std::string> validate_cnf(const Cnf& f) {
  std::vector<std::string> out;
  if (f.n_vars < 1) {
    out.push_back("formula needs at least one variable");
  }
  if (f.clauses.empty()) {
    out.push_back("formula needs at least one clause");
  }
  for (std::size_t c = 0; c < f.clauses.size(); ++c) {
    for (std::size_t i = 0; i < 3; ++i) {
      const int lit = f.clauses[c][i];
      if (lit == 0 || std::abs(lit) > f.n_vars) {
        out.push_back("clauses[" + std::to_string(c) + "][" + std::to_string(i) + "] is not a literal");
      }
    }
  }
  return out;
}

/// DIMACS CNF. Clauses with one or two literals are padded to three by
/// repeating their last literal; longer clauses are rejected.
inline Cnf parse_dimacs(std::istream& in) {
  Cnf f;
  bool header = false;
  std::vector<int> pending;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c" || tok[0] == '%') {
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      int clauses = 0;
      if (!(ls >> fmt >> f.n_vars >> clauses) || fmt != "cnf") {
        fail(ErrorKind::Data, "line " + std::to_string(lineno) + ": malformed problem line");
      }
      header = true;
      continue;
    }
    if (!header) {
      fail(ErrorKind::Data, "line " + std::to_string(lineno) + ": clause before problem line");
    }
    ls.clear();
    ls.str(line);
    int lit = 0;
    while (ls >> lit) {
      if (lit != 0) {
        pending.push_back(lit);
        continue;
      }
      if (pending.empty() || pending.size() > 3) {
        fail(ErrorKind::Data, "line " + std::to_string(lineno) + ": clauses must have 1 to 3 literals");
      }
      while (pending.size() < 3) {
        pending.push_back(pending.back());
      }
      f.clauses.push_back({pending[0], pending[1], pending[2]});
      pending.clear();
    }
  }
  if (!pending.empty()) {
    fail(ErrorKind::Data, "last clause is not terminated by 0");
  }
  if (auto v = validate_cnf(f); !v.empty()) {
    fail(ErrorKind::Data, "invalid formula: " + v.front());
  }
  return f;
}

/// assignment[v - 1] is the value of variable v.
inline bool clause_satisfied(const std::array<int, 3>& clause, const std::vector<bool>& assignment) {
  return std::any_of(clause.begin(), clause.end(), [&](int lit) {
    const bool val = assignment[static_cast<std::size_t>(std::abs(lit) - 1)];
    return lit > 0 ? val : !val;
  });
}

/// Bit j of prover i's codeword.
constexpr int hadamard_bit(int i, int j) noexcept {
  return std::popcount(static_cast<unsigned>(i & j)) & 1;
}

inline std::vector<int> hadamard_codeword(int r, int i) {
  std::vector<int> w(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) {
    w[static_cast<std::size_t>(j)] = hadamard_bit(i, j);
  }
  return w;
}

enum class SatLcMode { Enumerate, Sample };

struct SatLcOptions {
  SatLcMode mode = SatLcMode::Enumerate;
  long sample_count = 1000;
  std::uint64_t seed = 0;
  std::uint64_t edge_cap = 1'000'000;
};

/// One query item: a clause index (is_clause) or a variable (1-based).
struct QueryItem {
  bool is_clause = false;
  int index = 0;
  auto operator<=>(const QueryItem&) const = default;
};

struct SatLcResult {
  LabelCoverInstance lc;
  std::vector<std::vector<QueryItem>> query;  // per vertex
  std::vector<std::vector<int>> query_vars;   // per vertex, sorted distinct variables
  std::vector<std::vector<std::uint32_t>> answers; // per vertex: bit b = value of query_vars[b]; index = label
  std::vector<char> sentinel;                 // per vertex: no consistent answer
  std::vector<std::vector<int>> selected_vars; // per edge: x_0..x_{r-1}
};

namespace detail {

struct RandomString {
  std::vector<int> clauses;
  std::vector<int> positions;
};

inline void check_sat_lc_args(const Cnf& f, int r) {
  if (auto v = validate_cnf(f); !v.empty()) {
    fail(ErrorKind::Data, "invalid formula: " + v.front());
  }
  if (r < 2 || !std::has_single_bit(static_cast<unsigned>(r))) {
    fail(ErrorKind::Parameter, "r must be a power of two");
  }
  if (r > 8) {
    fail(ErrorKind::Parameter, "r must be at most 8");
  }
}

} // namespace detail

inline SatLcResult sat_to_lc(const Cnf& f, int r, const SatLcOptions& opt = {}) {
  detail::check_sat_lc_args(f, r);
  const int nc = static_cast<int>(f.clauses.size());
  const auto choices = static_cast<std::uint64_t>(3 * nc);

  std::vector<detail::RandomString> strings;
  if (opt.mode == SatLcMode::Enumerate) {
    const auto total = ipow(choices, static_cast<unsigned>(r));
    if (total > opt.edge_cap) {
      fail(ErrorKind::Size, "enumerating " + std::to_string(total) + " random strings exceeds cap " +
                                std::to_string(opt.edge_cap));
    }
    strings.reserve(total);
    for (std::uint64_t code = 0; code < total; ++code) {
      detail::RandomString s;
      std::uint64_t rest = code;
      for (int j = 0; j < r; ++j) {
        const auto pick = static_cast<int>(rest % choices);
        rest /= choices;
        s.clauses.push_back(pick / 3);
        s.positions.push_back(pick % 3);
      }
      strings.push_back(std::move(s));
    }
  } else {
    if (opt.sample_count < 1 || static_cast<std::uint64_t>(opt.sample_count) > opt.edge_cap) {
      fail(ErrorKind::Parameter, "sample count must lie in [1, edge cap]");
    }
    Rng rng(opt.seed);
    for (long i = 0; i < opt.sample_count; ++i) {
      detail::RandomString s;
      for (int j = 0; j < r; ++j) {
        s.clauses.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(nc))));
        s.positions.push_back(static_cast<int>(rng.below(3)));
      }
      strings.push_back(std::move(s));
    }
  }

  // Distinct queries per prover, numbered in first-seen order.
  std::vector<std::map<std::vector<QueryItem>, int>> local(static_cast<std::size_t>(r));
  std::vector<std::vector<std::vector<QueryItem>>> queries(static_cast<std::size_t>(r));
  std::vector<std::vector<int>> edge_local(strings.size(), std::vector<int>(static_cast<std::size_t>(r)));
  SatLcResult out;
  for (std::size_t h = 0; h < strings.size(); ++h) {
    const auto& s = strings[h];
    std::vector<int> xs(static_cast<std::size_t>(r));
    for (int j = 0; j < r; ++j) {
      xs[static_cast<std::size_t>(j)] =
          std::abs(f.clauses[static_cast<std::size_t>(s.clauses[static_cast<std::size_t>(j)])]
                            [static_cast<std::size_t>(s.positions[static_cast<std::size_t>(j)])]);
    }
    out.selected_vars.push_back(xs);
    for (int i = 0; i < r; ++i) {
      std::vector<QueryItem> q;
      for (int j = 0; j < r; ++j) {
        if (hadamard_bit(i, j) == 0) {
          q.push_back({true, s.clauses[static_cast<std::size_t>(j)]});
        } else {
          q.push_back({false, xs[static_cast<std::size_t>(j)]});
        }
      }
      auto& m = local[static_cast<std::size_t>(i)];
      auto [it, fresh] = m.emplace(q, static_cast<int>(queries[static_cast<std::size_t>(i)].size()));
      if (fresh) {
        queries[static_cast<std::size_t>(i)].push_back(std::move(q));
      }
      edge_local[h][static_cast<std::size_t>(i)] = it->second;
    }
  }

  auto& lc = out.lc;
  lc.r = r;
  lc.parts.resize(static_cast<std::size_t>(r));
  std::vector<int> part_base(static_cast<std::size_t>(r));
  int next_id = 0;
  for (int i = 0; i < r; ++i) {
    part_base[static_cast<std::size_t>(i)] = next_id;
    for (auto& q : queries[static_cast<std::size_t>(i)]) {
      lc.parts[static_cast<std::size_t>(i)].push_back(next_id++);
      out.query.push_back(q);
    }
  }

  // Answers: assignments to the query's variables (binary counting order,
  // first variable = lowest bit) that satisfy every queried clause.
  bool any_sentinel = false;
  std::vector<bool> assignment(static_cast<std::size_t>(f.n_vars), false);
  for (const auto& q : out.query) {
    std::vector<int> vars;
    for (const auto& item : q) {
      if (item.is_clause) {
        for (int lit : f.clauses[static_cast<std::size_t>(item.index)]) {
          vars.push_back(std::abs(lit));
        }
      } else {
        vars.push_back(item.index);
      }
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::vector<std::uint32_t> ans;
    for (std::uint32_t a = 0; a < (1u << vars.size()); ++a) {
      for (std::size_t b = 0; b < vars.size(); ++b) {
        assignment[static_cast<std::size_t>(vars[b] - 1)] = ((a >> b) & 1u) != 0;
      }
      const bool ok = std::all_of(q.begin(), q.end(), [&](const QueryItem& item) {
        return !item.is_clause || clause_satisfied(f.clauses[static_cast<std::size_t>(item.index)], assignment);
      });
      if (ok) {
        ans.push_back(a);
      }
    }
    out.sentinel.push_back(ans.empty());
    any_sentinel = any_sentinel || ans.empty();
    out.query_vars.push_back(std::move(vars));
    out.answers.push_back(std::move(ans));
  }

  lc.label_sizes.assign(static_cast<std::size_t>(r), 1);
  for (int i = 0; i < r; ++i) {
    for (int v : lc.parts[static_cast<std::size_t>(i)]) {
      lc.label_sizes[static_cast<std::size_t>(i)] =
          std::max(lc.label_sizes[static_cast<std::size_t>(i)], static_cast<int>(out.answers[static_cast<std::size_t>(v)].size()));
    }
  }
  lc.n_colors = (1 << r) + (any_sentinel ? r : 0);

  for (std::size_t h = 0; h < strings.size(); ++h) {
    std::vector<int> e(static_cast<std::size_t>(r));
    std::vector<std::vector<int>> proj(static_cast<std::size_t>(r));
    const auto& xs = out.selected_vars[h];
    for (int i = 0; i < r; ++i) {
      const int v = part_base[static_cast<std::size_t>(i)] + edge_local[h][static_cast<std::size_t>(i)];
      e[static_cast<std::size_t>(i)] = v;
      const auto& ans = out.answers[static_cast<std::size_t>(v)];
      const auto& vars = out.query_vars[static_cast<std::size_t>(v)];
      auto& tab = proj[static_cast<std::size_t>(i)];
      for (int l = 0; l < lc.label_sizes[static_cast<std::size_t>(i)]; ++l) {
        if (ans.empty()) {
          tab.push_back((1 << r) + i);
          continue;
        }
        const std::uint32_t a = ans[static_cast<std::size_t>(l) < ans.size() ? static_cast<std::size_t>(l) : 0];
        int color = 0;
        for (int j = 0; j < r; ++j) {
          const auto b = std::lower_bound(vars.begin(), vars.end(), xs[static_cast<std::size_t>(j)]) - vars.begin();
          color |= static_cast<int>((a >> b) & 1u) << j;
        }
        tab.push_back(color);
      }
    }
    lc.edges.push_back(std::move(e));
    lc.projections.push_back(std::move(proj));
  }
  return out;
}

/// Each vertex answers with the restriction of `assignment` (values of
/// variables 1..n, index v - 1) to its query, when that answer is a label;
/// otherwise label 0.
inline Labeling labeling_from_assignment(const SatLcResult& res, const std::vector<bool>& assignment) {
  Labeling lab;
  for (std::size_t v = 0; v < res.query_vars.size(); ++v) {
    std::uint32_t a = 0;
    const auto& vars = res.query_vars[v];
    for (std::size_t b = 0; b < vars.size(); ++b) {
      if (assignment.at(static_cast<std::size_t>(vars[b] - 1))) {
        a |= 1u << b;
      }
    }
    const auto& ans = res.answers[v];
    const auto it = std::find(ans.begin(), ans.end(), a);
    lab.sigma.push_back(it == ans.end() ? 0 : static_cast<int>(it - ans.begin()));
  }
  return lab;
}

} // namespace rkm
