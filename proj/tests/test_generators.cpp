#include <gtest/gtest.h>

#include <cmath>

#include "rkm/generators.hpp"

using namespace rkm;

namespace {

GenSpec spec_of(Family f, std::uint64_t seed) {
  GenSpec s;
  s.family = f;
  s.n_facilities = 30;
  s.n_groups = 10;
  s.clients_per_group = 10;
  s.mean_clients_per_group = 10;
  s.k = 7;
  s.seed = seed;
  return s;
}

} // namespace

TEST(Generate, UniformRangesAndCounts) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = generate(spec_of(Family::Uniform, seed));
    const auto& inst = g.instance;
    EXPECT_TRUE(validate_instance(inst).empty());
    EXPECT_EQ(inst.k, 7);
    EXPECT_EQ(inst.n_facilities(), 30);
    EXPECT_EQ(inst.n_groups(), 10);
    for (const auto& grp : inst.groups) {
      EXPECT_EQ(grp.size(), 10u);
    }
    for (const auto& p : inst.metric.as<PlanarMetric>().points) {
      EXPECT_GE(p[0], 0.0);
      EXPECT_LT(p[0], 100.0);
      EXPECT_GE(p[1], 0.0);
      EXPECT_LT(p[1], 100.0);
    }
    EXPECT_TRUE(g.groups.empty());
  }
}

TEST(Generate, GaussConstEqualSizes) {
  const auto g = generate(spec_of(Family::GaussConst, 3));
  ASSERT_EQ(g.groups.size(), 10u);
  for (const auto& d : g.groups) {
    EXPECT_EQ(d.size, 10);
    EXPECT_GE(d.v1, 0.0);
    EXPECT_LE(d.v1, 50.0);
    EXPECT_GE(d.theta, 0.0);
    EXPECT_LT(d.theta, 2 * std::numbers::pi);
  }
  EXPECT_TRUE(validate_instance(g.instance).empty());
}

TEST(Generate, GaussConstMoments) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto s = spec_of(Family::GaussConst, seed);
    s.n_groups = 1;
    s.clients_per_group = 10000;
    const auto g = generate(s);
    const auto& pts = g.instance.metric.as<PlanarMetric>().points;
    const auto& d = g.groups.front();
    const auto& grp = g.instance.groups.front();
    const double n = static_cast<double>(grp.size());
    double mx = 0;
    double my = 0;
    for (int c : grp) {
      const auto& p = pts[static_cast<std::size_t>(g.instance.client_points[static_cast<std::size_t>(c)])];
      mx += p[0];
      my += p[1];
    }
    mx /= n;
    my /= n;
    EXPECT_NEAR(mx, d.mean[0], 3 * std::sqrt(d.covariance[0] / n) + 1e-9);
    EXPECT_NEAR(my, d.mean[1], 3 * std::sqrt(d.covariance[2] / n) + 1e-9);
    double sxx = 0;
    double sxy = 0;
    double syy = 0;
    for (int c : grp) {
      const auto& p = pts[static_cast<std::size_t>(g.instance.client_points[static_cast<std::size_t>(c)])];
      sxx += (p[0] - mx) * (p[0] - mx);
      sxy += (p[0] - mx) * (p[1] - my);
      syy += (p[1] - my) * (p[1] - my);
    }
    sxx /= n - 1;
    sxy /= n - 1;
    syy /= n - 1;
    // Eigenvalues of the sample covariance against the drawn diagonal.
    const double tr = sxx + syy;
    const double disc = std::sqrt((sxx - syy) * (sxx - syy) / 4 + sxy * sxy);
    const double hi = tr / 2 + disc;
    const double lo = tr / 2 - disc;
    const double want_hi = std::max(d.v1, d.v2);
    const double want_lo = std::min(d.v1, d.v2);
    const double tol = 3 * std::sqrt(2.0 / n) * want_hi + 0.05;
    EXPECT_NEAR(hi, want_hi, tol);
    EXPECT_NEAR(lo, want_lo, tol);
    EXPECT_NEAR(sxy, d.covariance[1], tol);
  }
}

TEST(Generate, GaussExpMeanGroupSize) {
  auto s = spec_of(Family::GaussExp, 11);
  s.n_groups = 1000;
  s.mean_clients_per_group = 110;
  const auto g = generate(s);
  double total = 0;
  for (int sz : g.group_sizes) {
    EXPECT_GE(sz, 1);
    total += sz;
  }
  EXPECT_NEAR(total / 1000.0, 110.0, 10.0);
  EXPECT_EQ(g.instance.n_clients(), static_cast<int>(total));
}

TEST(Generate, Deterministic) {
  for (auto f : {Family::Uniform, Family::GaussConst, Family::GaussExp}) {
    EXPECT_EQ(generate(spec_of(f, 42)).instance, generate(spec_of(f, 42)).instance);
    EXPECT_NE(generate(spec_of(f, 42)).instance, generate(spec_of(f, 43)).instance);
  }
}

TEST(Generate, InvalidSpecs) {
  auto s = spec_of(Family::Uniform, 0);
  s.k = 31;
  EXPECT_THROW(generate(s), Error);
  s = spec_of(Family::GaussExp, 0);
  s.mean_clients_per_group = 0;
  EXPECT_THROW(generate(s), Error);
  s = spec_of(Family::GaussConst, 0);
  s.n_groups = 0;
  EXPECT_FALSE(validate_spec(s).empty());
}

TEST(Family, ParseAndPrint) {
  for (auto f : {Family::Uniform, Family::GaussConst, Family::GaussExp}) {
    EXPECT_EQ(parse_family(to_string(f)), f);
  }
  EXPECT_FALSE(parse_family("triangle").has_value());
}
