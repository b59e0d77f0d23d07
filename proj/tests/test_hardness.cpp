#include <gtest/gtest.h>

#include <sstream>

#include "rkm/combinatorics.hpp"
#include "rkm/lc_reduction.hpp"
#include "rkm/partition_system.hpp"
#include "rkm/sat_to_lc.hpp"
#include "support.hpp"

using namespace rkm;

namespace {

/// Direct r-intersecting check: for every r distinct colors and every part
/// choice, some element lies in all chosen parts.
bool naive_r_intersecting(const PartitionSystem& ps) {
  bool ok = true;
  for_each_combination(ps.n_colors, ps.r, [&](const std::vector<int>& colors) {
    const auto tuples = ipow(static_cast<std::uint64_t>(ps.r), static_cast<unsigned>(ps.r));
    for (std::uint64_t t = 0; t < tuples && ok; ++t) {
      std::vector<int> parts;
      auto rest = t;
      for (int i = 0; i < ps.r; ++i) {
        parts.push_back(static_cast<int>(rest % static_cast<std::uint64_t>(ps.r)));
        rest /= static_cast<std::uint64_t>(ps.r);
      }
      bool hit = false;
      for (int z = 0; z < ps.z_size && !hit; ++z) {
        hit = true;
        for (int i = 0; i < ps.r; ++i) {
          hit = hit && ps.part(colors[static_cast<std::size_t>(i)], z) == parts[static_cast<std::size_t>(i)];
        }
      }
      ok = ok && hit;
    }
  });
  return ok;
}

/// r = 2, one edge (u, v), two labels per side, two colors, identity projections.
LabelCoverInstance single_edge_identity() {
  LabelCoverInstance lc;
  lc.r = 2;
  lc.parts = {{0}, {1}};
  lc.label_sizes = {2, 2};
  lc.n_colors = 2;
  lc.edges = {{0, 1}};
  lc.projections = {{{0, 1}, {0, 1}}};
  return lc;
}

Cnf single_literal(const std::vector<int>& lits) {
  Cnf f;
  f.n_vars = 1;
  for (int l : lits) {
    f.clauses.push_back({l, l, l});
  }
  return f;
}

/// Enumerates every labeling of a small instance.
template <class F>
void for_each_labeling(const LabelCoverInstance& lc, F&& f) {
  const auto part_of = lc.part_of();
  Labeling lab;
  lab.sigma.assign(static_cast<std::size_t>(lc.n_vertices()), 0);
  while (true) {
    f(static_cast<const Labeling&>(lab));
    int v = 0;
    for (; v < lc.n_vertices(); ++v) {
      if (++lab.sigma[static_cast<std::size_t>(v)] < lc.labels_of(v, part_of)) {
        break;
      }
      lab.sigma[static_cast<std::size_t>(v)] = 0;
    }
    if (v == lc.n_vertices()) {
      return;
    }
  }
}

} // namespace

TEST(PartitionSystem, HypercubeSingletonIntersections) {
  const auto ps = hypercube_partition_system(2, 2);
  EXPECT_EQ(ps.z_size, 4);
  for (int e = 0; e < 4; ++e) {
    EXPECT_EQ(ps.part(0, e), e % 2);
    EXPECT_EQ(ps.part(1, e), e / 2);
  }
  for (int j1 = 0; j1 < 2; ++j1) {
    for (int j2 = 0; j2 < 2; ++j2) {
      int count = 0;
      for (int e = 0; e < 4; ++e) {
        count += ps.part(0, e) == j1 && ps.part(1, e) == j2;
      }
      EXPECT_EQ(count, 1);
    }
  }
  EXPECT_TRUE(verify_partition_system(ps, VerifyMode::Exhaustive).ok);
  EXPECT_TRUE(verify_partition_system(hypercube_partition_system(3, 4)).ok);
}

TEST(PartitionSystem, Random200Exhaustive) {
  const auto b = build_partition_system(2, 4, 0, {.z_size = 200});
  EXPECT_TRUE(b.verdict.ok);
  EXPECT_TRUE(b.verdict.exhaustive);
  EXPECT_EQ(b.verdict.tuples_checked, 24u);
  EXPECT_TRUE(naive_r_intersecting(b.system));
}

TEST(PartitionSystem, SingleElementFails) {
  try {
    build_partition_system(2, 2, 0, {.z_size = 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Construction);
    EXPECT_NE(std::string(e.what()).find("empty intersection"), std::string::npos);
  }
}

TEST(PartitionSystem, ColorWithEmptyPartReported) {
  auto ps = random_partition_system(2, 4, 200, 5);
  for (int z = 0; z < ps.z_size; ++z) {
    ps.assign[static_cast<std::size_t>(z)] = 0; // color 0
  }
  const auto v = verify_partition_system(ps, VerifyMode::Exhaustive);
  ASSERT_FALSE(v.ok);
  ASSERT_EQ(v.colors.front(), 0);
  EXPECT_EQ(v.parts.front(), 1);
  EXPECT_FALSE(naive_r_intersecting(ps));
  EXPECT_FALSE(verify_partition_system(ps, VerifyMode::Sampled, 1).ok);
}

TEST(PartitionSystem, VerifierAgreesWithNaiveCheck) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int r = 2 + static_cast<int>(seed % 2);
    const auto ps = random_partition_system(r, 4, 10 + static_cast<int>(seed), seed);
    EXPECT_EQ(verify_partition_system(ps, VerifyMode::Exhaustive).ok, naive_r_intersecting(ps)) << seed;
  }
}

TEST(PartitionSystem, DefaultSizeAndTotality) {
  EXPECT_EQ(default_z_size(2, 4), static_cast<int>(std::ceil(3 * 64 * std::log(4.0))));
  const auto b = build_partition_system(2, 8, 3);
  for (auto a : b.system.assign) {
    EXPECT_LT(a, 2);
  }
  EXPECT_EQ(b.system.assign.size(), static_cast<std::size_t>(8 * b.system.z_size));
}

TEST(PartitionSystem, LemmaSizePassRate) {
  int pass = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto ps = random_partition_system(2, 4, default_z_size(2, 4), seed);
    pass += verify_partition_system(ps).ok;
  }
  EXPECT_GE(pass, 19);
}

TEST(PartitionSystem, ParameterErrors) {
  EXPECT_THROW(build_partition_system(1, 4, 0), Error);
  EXPECT_THROW(build_partition_system(3, 2, 0), Error);
  EXPECT_THROW(hypercube_partition_system(2, 40), Error);
}

TEST(LcToMcsp, SingleEdgeStructure) {
  const auto lc = single_edge_identity();
  const auto red = lc_to_mcsp(lc, 7, {.z_size = 200});
  const auto& m = red.mcsp;
  EXPECT_EQ(m.n_sets(), 4);
  EXPECT_EQ(m.t, 2);
  EXPECT_EQ(m.m, 200);
  const auto& ps = red.systems.front();
  for (int v = 0; v < 2; ++v) {
    for (int l = 0; l < 2; ++l) {
      std::vector<int> want;
      for (int e = 0; e < 200; ++e) {
        if (ps.part(l, e) == v) {
          want.push_back(e);
        }
      }
      EXPECT_EQ(m.sets[static_cast<std::size_t>(red.set_offset[static_cast<std::size_t>(v)] + l)], want);
      EXPECT_EQ(red.provenance.set_origin[static_cast<std::size_t>(2 * v + l)].vertex, v);
      EXPECT_EQ(red.provenance.set_origin[static_cast<std::size_t>(2 * v + l)].label, l);
    }
  }
  EXPECT_EQ(red.uncovered_elements, 0);
  EXPECT_TRUE(validate_mcsp(m).empty());
}

TEST(LcToMcsp, AgreeingLabelsGiveCongestionOne) {
  const auto lc = single_edge_identity();
  const auto red = lc_to_mcsp(lc, 7, {.z_size = 200});
  const auto sel = witness_from_labeling(red.mcsp, red.provenance, Labeling{{0, 0}});
  EXPECT_EQ(sel.chosen, (std::vector<int>{0, 2}));
  const auto rep = congestion(red.mcsp, sel);
  EXPECT_EQ(rep.max_congestion, 1);
  EXPECT_TRUE(std::all_of(rep.per_element.begin(), rep.per_element.end(), [](int c) { return c == 1; }));
}

TEST(LcToMcsp, DisagreeingLabelsGiveCongestionTwo) {
  const auto lc = single_edge_identity();
  const auto red = lc_to_mcsp(lc, 7, {.z_size = 200});
  const auto& ps = red.systems.front();
  bool meet = false;
  for (int e = 0; e < ps.z_size; ++e) {
    meet = meet || (ps.part(0, e) == 0 && ps.part(1, e) == 1);
  }
  ASSERT_TRUE(meet);
  EXPECT_EQ(congestion(red.mcsp, SetSelection{{0, 3}}).max_congestion, 2);
}

TEST(LcToMcsp, UniverseIsEdgesTimesGround) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ToyLabelCoverSpec s;
    s.r = 2 + static_cast<int>(seed % 2);
    s.vertices_per_part = 2;
    s.labels = 2;
    s.n_colors = 3;
    s.n_edges = 3;
    s.seed = seed;
    const auto p = planted_label_cover(s);
    const auto red = lc_to_mcsp(p.lc, seed, {.z_size = 150});
    EXPECT_EQ(red.mcsp.m, p.lc.n_edges() * red.provenance.elements_per_edge);
    EXPECT_EQ(red.provenance.element_origin(151), std::make_pair(1, 1));
  }
}

TEST(LcToMcsp, IsolatedVertexRejected) {
  auto lc = single_edge_identity();
  lc.parts[0].push_back(2);
  EXPECT_THROW(lc_to_mcsp(lc, 0, {.z_size = 50}), Error);
}

TEST(LcToMcsp, PlantedWitnessHasCongestionOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ToyLabelCoverSpec s;
    s.n_edges = 2 + static_cast<int>(seed % 3);
    s.labels = 2 + static_cast<int>(seed % 2);
    s.seed = seed;
    const auto p = planted_label_cover(s);
    EXPECT_DOUBLE_EQ(satisfaction_stats(p.lc, p.planted).strong_fraction, 1.0);
    const auto red = lc_to_mcsp(p.lc, 100 + seed, {.z_size = 120});
    const auto sel = witness_from_labeling(red.mcsp, red.provenance, p.planted);
    EXPECT_EQ(static_cast<int>(sel.chosen.size()), red.mcsp.t);
    EXPECT_EQ(congestion(red.mcsp, sel).max_congestion, 1);
  }
}

TEST(Decode, SingletonPalettes) {
  const auto lc = single_edge_identity();
  const auto red = lc_to_mcsp(lc, 7, {.z_size = 100});
  EXPECT_EQ(decode_labeling(lc, SetSelection{{1, 3}}, red.provenance, 0).sigma, (std::vector<int>{1, 1}));
}

TEST(Decode, UniformOverPalette) {
  const auto lc = single_edge_identity();
  const auto red = lc_to_mcsp(lc, 7, {.z_size = 100});
  int ones = 0;
  const int n = 10000;
  for (int seed = 0; seed < n; ++seed) {
    ones += decode_labeling(lc, SetSelection{{0, 1}}, red.provenance, static_cast<std::uint64_t>(seed)).sigma[0];
  }
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.5, 0.05);
}

TEST(Decode, EmptyPaletteFallsBackToLowest) {
  const auto lc = single_edge_identity();
  const auto red = lc_to_mcsp(lc, 7, {.z_size = 100});
  EXPECT_EQ(decode_labeling(lc, SetSelection{{1}}, red.provenance, 3).sigma[1], 0);
}

TEST(Satisfaction, Examples) {
  const auto lc = single_edge_identity();
  const auto agree = satisfaction_stats(lc, Labeling{{0, 0}});
  EXPECT_DOUBLE_EQ(agree.strong_fraction, 1.0);
  EXPECT_DOUBLE_EQ(agree.weak_fraction, 1.0);
  const auto disagree = satisfaction_stats(lc, Labeling{{0, 1}});
  EXPECT_DOUBLE_EQ(disagree.strong_fraction, 0.0);
  EXPECT_DOUBLE_EQ(disagree.weak_fraction, 0.0);

  LabelCoverInstance tri;
  tri.r = 3;
  tri.parts = {{0}, {1}, {2}};
  tri.label_sizes = {1, 1, 1};
  tri.n_colors = 2;
  tri.edges = {{0, 1, 2}};
  tri.projections = {{{0}, {0}, {1}}};
  const auto split = satisfaction_stats(tri, Labeling{{0, 0, 0}});
  EXPECT_DOUBLE_EQ(split.strong_fraction, 0.0);
  EXPECT_DOUBLE_EQ(split.weak_fraction, 1.0);
}

TEST(Satisfaction, LabelOutOfRange) {
  EXPECT_THROW(satisfaction_stats(single_edge_identity(), Labeling{{0, 2}}), Error);
}

TEST(LineEmbedding, TwoBlocks) {
  const auto red = lc_to_mcsp(single_edge_identity(), 7, {.z_size = 100});
  const auto line = mcsp_to_line_rkm(red.mcsp, red.provenance);
  EXPECT_EQ(line.embedding.position, (std::vector<double>{0, 1, 3, 4}));
  EXPECT_EQ(line.instance.k, 2);
  EXPECT_TRUE(validate_instance(line.instance).empty());
}

TEST(LineEmbedding, MissingProvenanceRejected) {
  const auto red = lc_to_mcsp(single_edge_identity(), 7, {.z_size = 100});
  EXPECT_THROW(mcsp_to_line_rkm(red.mcsp, McspProvenance{}), Error);
}

TEST(LineEmbedding, WitnessObjectiveOneAndLowerBound) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    ToyLabelCoverSpec s;
    s.n_edges = 2 + static_cast<int>(seed % 2);
    s.seed = seed;
    const auto p = planted_label_cover(s);
    const auto red = lc_to_mcsp(p.lc, seed, {.z_size = 100});
    const auto line = mcsp_to_line_rkm(red.mcsp, red.provenance);
    const auto& inst = line.instance;
    const int n = red.mcsp.n_sets();
    const auto witness = witness_from_labeling(red.mcsp, red.provenance, p.planted);
    const auto open = open_from_selection(n, witness);
    EXPECT_DOUBLE_EQ(eval_objective(inst, open).value, 1.0);
    for_each_combination(n, inst.k, [&](const std::vector<int>& o) {
      const auto closed = selection_from_open(n, o);
      const int cong = congestion(red.mcsp, closed).max_congestion;
      EXPECT_GE(eval_objective(inst, FacilitySolution{o}).value, cong - 1e-12);
    });
  }
}

TEST(Claim8, LoadSumOnRegularInstances) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    ToyLabelCoverSpec s;
    s.r = 2 + static_cast<int>(seed % 2);
    s.vertices_per_part = 3;
    s.labels = 2;
    s.n_colors = 3;
    s.seed = seed;
    const auto lc = regular_label_cover(s, 2);
    for (int d : vertex_degrees(lc)) {
      EXPECT_EQ(d, 2);
    }
    const auto red = lc_to_mcsp(lc, seed, {.z_size = 150});
    Rng rng(seed);
    for (int trial = 0; trial < 50; ++trial) {
      auto chosen = rng.sample_without_replacement(red.mcsp.n_sets(), red.mcsp.t);
      const auto load = edge_loads(red.mcsp, red.provenance, chosen);
      EXPECT_EQ(std::accumulate(load.begin(), load.end(), 0), lc.r * lc.n_edges());
    }
  }
}

TEST(SatToLc, HadamardCodewords) {
  EXPECT_EQ(hadamard_codeword(2, 0), (std::vector<int>{0, 0}));
  EXPECT_EQ(hadamard_codeword(2, 1), (std::vector<int>{0, 1}));
  for (int r : {2, 4, 8}) {
    for (int a = 0; a < r; ++a) {
      for (int b = a + 1; b < r; ++b) {
        int dist = 0;
        for (int j = 0; j < r; ++j) {
          dist += hadamard_bit(a, j) != hadamard_bit(b, j);
        }
        EXPECT_EQ(dist, r / 2);
      }
    }
  }
}

TEST(SatToLc, SatisfiableSingleClause) {
  const auto res = sat_to_lc(single_literal({1}), 2);
  ASSERT_TRUE(validate_label_cover(res.lc).empty());
  EXPECT_EQ(res.lc.n_edges(), 9);
  const auto st = satisfaction_stats(res.lc, labeling_from_assignment(res, {true}));
  EXPECT_DOUBLE_EQ(st.strong_fraction, 1.0);
  EXPECT_DOUBLE_EQ(st.weak_fraction, 1.0);
}

TEST(SatToLc, SatisfiableFormulaStronglySatisfied) {
  Cnf f;
  f.n_vars = 3;
  f.clauses = {{1, 2, -3}, {-1, 3, 2}};
  const auto res = sat_to_lc(f, 2);
  const auto st = satisfaction_stats(res.lc, labeling_from_assignment(res, {true, true, false}));
  EXPECT_DOUBLE_EQ(st.strong_fraction, 1.0);
}

TEST(SatToLc, UnsatisfiableHasNoFullLabeling) {
  const auto res = sat_to_lc(single_literal({1, -1}), 2);
  ASSERT_TRUE(validate_label_cover(res.lc).empty());
  bool any = false;
  for_each_labeling(res.lc, [&](const Labeling& lab) {
    any = any || satisfaction_stats(res.lc, lab).strong_edges == res.lc.n_edges();
  });
  EXPECT_FALSE(any);
}

TEST(SatToLc, ParameterAndSizeErrors) {
  EXPECT_THROW(sat_to_lc(single_literal({1}), 3), Error);
  Cnf big;
  big.n_vars = 3;
  for (int i = 0; i < 12; ++i) {
    big.clauses.push_back({1, 2, 3});
  }
  try {
    sat_to_lc(big, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Size);
  }
}

TEST(SatToLc, SampleModeDeterministic) {
  Cnf f;
  f.n_vars = 4;
  f.clauses = {{1, 2, 3}, {-2, 3, 4}, {1, -4, -3}};
  SatLcOptions opt;
  opt.mode = SatLcMode::Sample;
  opt.sample_count = 50;
  opt.seed = 9;
  const auto a = sat_to_lc(f, 4, opt);
  EXPECT_EQ(a.lc, sat_to_lc(f, 4, opt).lc);
  EXPECT_EQ(a.lc.n_edges(), 50);
  EXPECT_TRUE(validate_label_cover(a.lc).empty());
}

TEST(Dimacs, ParsesClauses) {
  std::istringstream in("c comment\np cnf 3 2\n1 -2 3 0\n-1 2 0\n");
  const auto f = parse_dimacs(in);
  EXPECT_EQ(f.n_vars, 3);
  ASSERT_EQ(f.clauses.size(), 2u);
  EXPECT_EQ(f.clauses[0], (std::array<int, 3>{1, -2, 3}));
}
