#pragma once

// Random planar instance families.
//
//   uniform      sites and clients i.i.d. uniform on [0,100]^2, equal groups
//   gauss_const  sites uniform; each group is a 2-D gaussian cloud with
//                covariance R(theta) diag(v1, v2) R(theta)^T, v1, v2 ~ U[0,50],
//                theta ~ U[0, 2pi), mean ~ U([0,100]^2); equal groups
//   gauss_exp    as gauss_const, group size max(1, round(Exp(mean)))
//
// Gaussian clients are not clipped to the square. Draw order is fixed (sites,
// then per group: parameters, size, clients) so a spec reproduces bit-for-bit.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rkm/core.hpp"
#include "rkm/error.hpp"
#include "rkm/rng.hpp"

namespace rkm {

enum class Family { Uniform, GaussConst, GaussExp };

inline const char* to_string(Family f) noexcept {
  switch (f) {
  case Family::Uniform:
    return "uniform";
  case Family::GaussConst:
    return "gauss_const";
  default:
    return "gauss_exp";
  }
}

inline std::optional<Family> parse_family(const std::string& s) {
  if (s == "uniform") {
    return Family::Uniform;
  }
  if (s == "gauss_const" || s == "gauss-const") {
    return Family::GaussConst;
  }
  if (s == "gauss_exp" || s == "gauss-exp") {
    return Family::GaussExp;
  }
  return std::nullopt;
}

struct GenSpec {
  Family family = Family::Uniform;
  int n_facilities = 30;
  int n_groups = 10;
  int clients_per_group = 10;         // uniform, gauss_const
  double mean_clients_per_group = 10; // gauss_exp
  int k = 7;
  std::uint64_t seed = 0;
};

struct GroupDraw {
  std::array<double, 2> mean{};
  double v1 = 0.0;
  double v2 = 0.0;
  double theta = 0.0;
  std::array<double, 3> covariance{}; // sxx, sxy, syy
  int size = 0;
};

struct GeneratedInstance {
  RkmInstance instance;
  GenSpec spec;
  std::vector<GroupDraw> groups; // gaussian parameters; empty for uniform
  std::vector<int> group_sizes;
};

inline std::vector<std::string> validate_spec(const GenSpec& spec) {
  std::vector<std::string> out;
  if (spec.n_facilities < 1) {
    out.push_back("n_facilities must be at least 1");
  }
  if (spec.n_groups < 1) {
    out.push_back("n_groups must be at least 1");
  }
  if (spec.family != Family::GaussExp && spec.clients_per_group < 1) {
    out.push_back("clients_per_group must be at least 1");
  }
  if (spec.family == Family::GaussExp && !(spec.mean_clients_per_group > 0)) {
    out.push_back("mean_clients_per_group must be positive");
  }
  if (spec.k < 1 || spec.k > spec.n_facilities) {
    out.push_back("k must lie in [1, n_facilities]");
  }
  return out;
}

inline GeneratedInstance generate(const GenSpec& spec) {
  if (auto v = validate_spec(spec); !v.empty()) {
    fail(ErrorKind::Parameter, "invalid generator spec: " + v.front());
  }
  constexpr double side = 100.0;
  Rng rng(spec.seed);
  GeneratedInstance out;
  out.spec = spec;

  PlanarMetric metric;
  for (int f = 0; f < spec.n_facilities; ++f) {
    const double x = rng.uniform(0.0, side);
    const double y = rng.uniform(0.0, side);
    metric.points.push_back({x, y});
  }

  auto& inst = out.instance;
  for (int f = 0; f < spec.n_facilities; ++f) {
    inst.facility_sites.push_back(f);
  }

  for (int g = 0; g < spec.n_groups; ++g) {
    Group members;
    if (spec.family == Family::Uniform) {
      for (int i = 0; i < spec.clients_per_group; ++i) {
        const double x = rng.uniform(0.0, side);
        const double y = rng.uniform(0.0, side);
        members.push_back(inst.n_clients());
        inst.client_points.push_back(static_cast<int>(metric.points.size()));
        metric.points.push_back({x, y});
      }
      out.group_sizes.push_back(spec.clients_per_group);
    } else {
      GroupDraw draw;
      draw.v1 = rng.uniform(0.0, 50.0);
      draw.v2 = rng.uniform(0.0, 50.0);
      draw.theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double mx = rng.uniform(0.0, side);
      const double my = rng.uniform(0.0, side);
      draw.mean = {mx, my};
      const double c = std::cos(draw.theta);
      const double s = std::sin(draw.theta);
      draw.covariance = {c * c * draw.v1 + s * s * draw.v2, c * s * (draw.v1 - draw.v2),
                         s * s * draw.v1 + c * c * draw.v2};
      if (spec.family == Family::GaussConst) {
        draw.size = spec.clients_per_group;
      } else {
        const double raw = rng.exponential(spec.mean_clients_per_group);
        draw.size = std::max(1, static_cast<int>(std::floor(raw + 0.5)));
      }
      const double sd1 = std::sqrt(draw.v1);
      const double sd2 = std::sqrt(draw.v2);
      for (int i = 0; i < draw.size; ++i) {
        const double z1 = rng.normal() * sd1;
        const double z2 = rng.normal() * sd2;
        members.push_back(inst.n_clients());
        inst.client_points.push_back(static_cast<int>(metric.points.size()));
        metric.points.push_back({mx + c * z1 - s * z2, my + s * z1 + c * z2});
      }
      out.group_sizes.push_back(draw.size);
      out.groups.push_back(draw);
    }
    inst.groups.push_back(std::move(members));
  }
  inst.metric = std::move(metric);
  inst.k = spec.k;
  return out;
}

} // namespace rkm
