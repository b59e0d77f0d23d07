#include <gtest/gtest.h>

#include <sstream>

#include "rational_oracle.hpp"
#include "rkm/mcsp.hpp"
#include "rkm/relaxations.hpp"
#include "rkm/simplex.hpp"
#include "support.hpp"

using namespace rkm;

namespace {

void expect_feasible(const LpModel& model, const LpSolution& sol) {
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  const auto v = check_feasibility(model, sol.values);
  EXPECT_TRUE(v.empty()) << v.front();
}

RkmInstance midpoint_client() {
  RkmInstance inst;
  inst.metric = LineMetric{{0.0, 10.0, 5.0}};
  inst.facility_sites = {0, 1};
  inst.client_points = {2};
  inst.groups = {{0}};
  inst.k = 1;
  return inst;
}

} // namespace

TEST(Simplex, MaxOfLowerBounds) {
  LpModel m;
  const int t = m.add_variable("T", 0.0, kInf);
  m.objective = {{t, 1.0}};
  m.add_row("a", {{t, 1.0}}, Sense::Ge, 3.0);
  m.add_row("b", {{t, 1.0}}, Sense::Ge, 5.0);
  const auto sol = solve_lp(m);
  expect_feasible(m, sol);
  EXPECT_NEAR(sol.objective, 5.0, 1e-9);
}

TEST(Simplex, Infeasible) {
  LpModel m;
  const int x = m.add_variable("x", 0.0, 1.0);
  m.objective = {{x, 1.0}};
  m.add_row("a", {{x, 1.0}}, Sense::Ge, 2.0);
  EXPECT_EQ(solve_lp(m).status, LpStatus::Infeasible);
}

TEST(Simplex, Unbounded) {
  LpModel m;
  const int x = m.add_variable("x", 0.0, kInf);
  const int y = m.add_variable("y", 0.0, kInf);
  m.objective = {{x, -1.0}};
  m.add_row("a", {{x, 1.0}, {y, -1.0}}, Sense::Le, 1.0);
  EXPECT_EQ(solve_lp(m).status, LpStatus::Unbounded);
}

TEST(Simplex, EqualityRows) {
  LpModel m;
  const int x = m.add_variable("x", 0.0, kInf);
  const int y = m.add_variable("y", 0.0, kInf);
  m.objective = {{x, 1.0}, {y, 2.0}};
  m.add_row("sum", {{x, 1.0}, {y, 1.0}}, Sense::Eq, 4.0);
  m.add_row("cap", {{x, 1.0}}, Sense::Le, 3.0);
  const auto sol = solve_lp(m);
  expect_feasible(m, sol);
  EXPECT_NEAR(sol.objective, 5.0, 1e-9);
}

TEST(Simplex, MalformedModelRejected) {
  LpModel m;
  m.add_variable("x", 0.0, 1.0);
  m.objective = {{3, 1.0}};
  EXPECT_THROW(solve_lp(m), Error);
}

TEST(Simplex, Deterministic) {
  const auto model = build_rkm_lp(test::small_planar(Family::Uniform, 8, 3, 5, 3, 4));
  const auto a = solve_lp(model);
  const auto b = solve_lp(model);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Simplex, MatchesRationalOracle) {
  Rng rng(2024);
  int feasible = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto model = test::random_tiny_lp(rng, 5, 5);
    const auto exact = test::rational_optimum(model);
    const auto sol = solve_lp(model);
    if (!exact) {
      EXPECT_EQ(sol.status, LpStatus::Infeasible) << "trial " << trial;
      continue;
    }
    ++feasible;
    expect_feasible(model, sol);
    EXPECT_NEAR(sol.objective, exact->get_d(), 1e-6) << "trial " << trial;
  }
  EXPECT_GE(feasible, 20);
}

TEST(McspLp, GapFamilyHasValueOne) {
  for (int d : {2, 3}) {
    const auto inst = build_integrality_gap(d);
    const auto model = build_mcsp_lp(inst);
    const auto sol = solve_lp(model);
    expect_feasible(model, sol);
    EXPECT_NEAR(sol.objective, 1.0, 1e-6);
    // The uniform point 1/d is feasible with value one.
    std::vector<double> uniform(static_cast<std::size_t>(inst.n_sets()), 1.0 / d);
    uniform.push_back(1.0);
    EXPECT_TRUE(check_feasibility(model, uniform).empty());
  }
}

TEST(McspLp, DisjointSetsSpreadEvenly) {
  McspInstance inst{6, {{0, 1}, {2, 3}, {4, 5}}, 2};
  EXPECT_NEAR(solve_lp(build_mcsp_lp(inst)).objective, 2.0 / 3.0, 1e-9);
  inst.t = 3;
  EXPECT_NEAR(solve_lp(build_mcsp_lp(inst)).objective, 1.0, 1e-9);
}

TEST(McspLp, ExplicitUnitBounds) {
  const auto model = build_mcsp_lp(McspInstance{3, {{0, 1}, {1, 2}}, 1});
  ASSERT_EQ(model.n_vars(), 3);
  EXPECT_EQ(model.vars[0].upper, 1.0);
  EXPECT_EQ(model.vars[1].upper, 1.0);
  EXPECT_TRUE(std::isinf(model.vars[2].upper));
}

TEST(RkmLp, AllOpenIsZero) {
  const auto sol = solve_lp(build_rkm_lp(test::three_point_uniform(3)));
  EXPECT_NEAR(sol.objective, 0.0, 1e-9);
}

TEST(RkmLp, MidpointClientIsFive) {
  const auto inst = midpoint_client();
  const auto model = build_rkm_lp(inst);
  const auto sol = solve_lp(model);
  expect_feasible(model, sol);
  EXPECT_NEAR(sol.objective, 5.0, 1e-9);
  EXPECT_DOUBLE_EQ(test::naive_optimum(inst), 5.0);
}

TEST(RkmLp, GapInstanceLpOneOptTwo) {
  const auto inst = mcsp_to_rkm(build_integrality_gap(2));
  const auto model = build_rkm_lp(inst);
  const auto sol = solve_lp(model);
  expect_feasible(model, sol);
  EXPECT_NEAR(sol.objective, 1.0, 1e-6);
  EXPECT_DOUBLE_EQ(test::naive_optimum(inst), 2.0);
}

TEST(RkmLp, LayoutOrdering) {
  const auto inst = test::three_point_uniform(1);
  const auto model = build_rkm_lp(inst);
  const auto layout = rkm_lp_layout(inst);
  EXPECT_EQ(model.vars[static_cast<std::size_t>(layout.x(2))].name, "x_2");
  EXPECT_EQ(model.vars[static_cast<std::size_t>(layout.y(1, 2))].name, "y_1_2");
  EXPECT_EQ(model.vars[static_cast<std::size_t>(layout.t())].name, "T");
  EXPECT_EQ(model.n_vars(), 3 + 9 + 1);
  EXPECT_EQ(model.n_rows(), 9 + 3 + 2 + 1);
}

TEST(RkmLp, LowerBoundSoundness) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto f = seed % 2 ? Family::GaussConst : Family::Uniform;
    const auto inst = test::small_planar(f, 7, 3, 4, 3, seed);
    const auto model = build_rkm_lp(inst);
    const auto sol = solve_lp(model);
    expect_feasible(model, sol);
    EXPECT_LE(sol.objective, test::naive_optimum(inst) + 1e-6) << "seed " << seed;
  }
}

TEST(RkmLp, McspLpMatchesRkmLpOnUniformReduction) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = test::random_mcsp(rng, 5, 4);
    const double mcsp_lp = solve_lp(build_mcsp_lp(inst)).objective;
    EXPECT_LE(mcsp_lp, brute_force_mcsp(inst).opt_value + 1e-6);
  }
}

TEST(NearestFirst, PreservesTAndGroupCosts) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = test::small_planar(Family::GaussExp, 8, 4, 5, 3, 50 + seed);
    const auto model = build_rkm_lp(inst);
    const auto sol = solve_lp(model);
    const auto layout = rkm_lp_layout(inst);
    const auto post = nearest_first_assignment(inst, sol.values);
    EXPECT_TRUE(check_feasibility(model, post).empty());
    EXPECT_NEAR(post[static_cast<std::size_t>(layout.t())], sol.objective, 1e-6);
    for (const auto& g : inst.groups) {
      double before = 0;
      double after = 0;
      for (int c : g) {
        for (int j = 0; j < layout.n_sites; ++j) {
          before += inst.distance(c, j) * sol.values[static_cast<std::size_t>(layout.y(c, j))];
          after += inst.distance(c, j) * post[static_cast<std::size_t>(layout.y(c, j))];
        }
      }
      EXPECT_LE(after, before + 1e-9);
    }
    for (int i = 0; i < layout.n_clients; ++i) {
      for (int j = 0; j < layout.n_sites; ++j) {
        if (post[static_cast<std::size_t>(layout.y(i, j))] > 0) {
          EXPECT_GT(post[static_cast<std::size_t>(layout.x(j))], 0);
        }
      }
    }
  }
}

TEST(LpFormat, FixedSections) {
  std::ostringstream os;
  write_lp_format(os, build_mcsp_lp(McspInstance{3, {{0, 1}, {1, 2}}, 1}));
  const std::string s = os.str();
  const auto minimize = s.find("Minimize");
  const auto subject = s.find("Subject To");
  const auto bounds = s.find("Bounds");
  const auto end = s.find("End");
  ASSERT_NE(minimize, std::string::npos);
  EXPECT_LT(minimize, subject);
  EXPECT_LT(subject, bounds);
  EXPECT_LT(bounds, end);
  EXPECT_NE(s.find("0 <= y_0 <= 1"), std::string::npos);
  EXPECT_NE(s.find(" z >= 0"), std::string::npos);
}

TEST(Rounding, HalfSaturates) {
  const auto inst = build_integrality_gap(2);
  const std::vector<double> half(4, 0.5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(round_mcsp(inst, half, seed).drawn.chosen.size(), 4u);
  }
}

TEST(Rounding, ZeroNeverChosen) {
  const auto inst = build_integrality_gap(2);
  const std::vector<double> y{0.0, 0.3, 0.3, 0.4};
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto res = round_mcsp(inst, y, seed);
    EXPECT_FALSE(std::binary_search(res.drawn.chosen.begin(), res.drawn.chosen.end(), 0));
  }
}

TEST(Rounding, MarginalFrequencies) {
  const auto inst = build_integrality_gap(2);
  const std::vector<double> y{0.1, 0.25, 0.35, 0.8};
  std::vector<int> hits(4, 0);
  const int n = 10000;
  for (int seed = 0; seed < n; ++seed) {
    for (int s : round_mcsp(inst, y, static_cast<std::uint64_t>(seed)).drawn.chosen) {
      ++hits[static_cast<std::size_t>(s)];
    }
  }
  for (std::size_t s = 0; s < 4; ++s) {
    EXPECT_NEAR(static_cast<double>(hits[s]) / n, std::min(1.0, 2 * y[s]), 0.02);
  }
}

TEST(Rounding, MeanCongestionOnGap4) {
  const auto inst = build_integrality_gap(4);
  const auto sol = solve_lp(build_mcsp_lp(inst));
  const double z = sol.objective;
  std::vector<double> total(static_cast<std::size_t>(inst.m), 0.0);
  const int seeds = 200;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto res = round_mcsp(inst, sol.values, static_cast<std::uint64_t>(seed));
    const auto cong = congestion_of(inst, res.drawn.chosen).per_element;
    for (std::size_t e = 0; e < total.size(); ++e) {
      total[e] += cong[e];
    }
  }
  for (double t : total) {
    EXPECT_LE(t / seeds, 2.5 * z);
  }
}

TEST(Rounding, TrimOrPadReachesT) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = test::random_mcsp(rng, 6, 5);
    std::vector<double> y(5);
    for (auto& v : y) {
      v = rng.uniform();
    }
    const auto res = round_mcsp(inst, y, static_cast<std::uint64_t>(trial), RoundingRepair::TrimOrPad);
    EXPECT_EQ(static_cast<int>(res.selection.chosen.size()), inst.t);
    EXPECT_TRUE(std::is_sorted(res.selection.chosen.begin(), res.selection.chosen.end()));
    EXPECT_EQ(res.repaired, res.selection != res.drawn);
  }
}
