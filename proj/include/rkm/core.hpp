#pragma once

// Robust k-Median instances, solutions and the min-max objective.
//
// An instance lives on a finite metric space of points. Facility sites and
// client points are both lists of point indices into that metric, so a client
// may sit exactly on a site. Groups are lists of client indices; a client may
// belong to several groups, and a client repeated inside one group is counted
// once per occurrence.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "rkm/error.hpp"

namespace rkm {

inline constexpr double kImproveTol = 1e-9;

struct ExplicitMetric {
  int n = 0;
  std::vector<double> matrix; // row-major n*n
  bool operator==(const ExplicitMetric&) const = default;
};

struct UniformMetric {
  int n = 0;
  bool operator==(const UniformMetric&) const = default;
};

struct PlanarMetric {
  std::vector<std::array<double, 2>> points;
  bool operator==(const PlanarMetric&) const = default;
};

struct LineMetric {
  std::vector<double> coords;
  bool operator==(const LineMetric&) const = default;
};

class Metric {
public:
  using Variant = std::variant<ExplicitMetric, UniformMetric, PlanarMetric, LineMetric>;

  Metric() : v_(UniformMetric{}) {}
  Metric(ExplicitMetric m) : v_(std::move(m)) {}
  Metric(UniformMetric m) : v_(m) {}
  Metric(PlanarMetric m) : v_(std::move(m)) {}
  Metric(LineMetric m) : v_(std::move(m)) {}

  const Variant& variant() const noexcept { return v_; }

  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(v_);
  }

  template <class T>
  const T& as() const {
    return std::get<T>(v_);
  }

  int size() const noexcept {
    return std::visit(
        [](const auto& m) -> int {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ExplicitMetric> || std::is_same_v<T, UniformMetric>) {
            return m.n;
          } else if constexpr (std::is_same_v<T, PlanarMetric>) {
            return static_cast<int>(m.points.size());
          } else {
            return static_cast<int>(m.coords.size());
          }
        },
        v_);
  }

  const char* type_name() const noexcept {
    constexpr const char* names[] = {"explicit", "uniform", "planar", "line"};
    return names[v_.index()];
  }

  /// Distance between points a and b. Indices are not range checked.
  double operator()(int a, int b) const noexcept {
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(b);
    switch (v_.index()) {
    case 0: {
      const auto& m = std::get<ExplicitMetric>(v_);
      return m.matrix[ua * static_cast<std::size_t>(m.n) + ub];
    }
    case 1:
      return a == b ? 0.0 : 1.0;
    case 2: {
      const auto& p = std::get<PlanarMetric>(v_).points;
      return std::hypot(p[ua][0] - p[ub][0], p[ua][1] - p[ub][1]);
    }
    default: {
      const auto& c = std::get<LineMetric>(v_).coords;
      return std::abs(c[ua] - c[ub]);
    }
    }
  }

  bool operator==(const Metric&) const = default;

private:
  Variant v_;
};

using Group = std::vector<int>;

struct RkmInstance {
  Metric metric;
  std::vector<int> facility_sites; // site index -> metric point
  std::vector<int> client_points;  // client index -> metric point
  std::vector<Group> groups;       // lists of client indices
  int k = 1;

  int n_facilities() const noexcept { return static_cast<int>(facility_sites.size()); }
  int n_clients() const noexcept { return static_cast<int>(client_points.size()); }
  int n_groups() const noexcept { return static_cast<int>(groups.size()); }

  double distance(int client, int site) const noexcept {
    return metric(client_points[static_cast<std::size_t>(client)],
                  facility_sites[static_cast<std::size_t>(site)]);
  }

  bool operator==(const RkmInstance&) const = default;
};

/// Open facility sites, kept sorted ascending.
struct FacilitySolution {
  std::vector<int> open;
  bool operator==(const FacilitySolution&) const = default;
};

/// Dense client x site distance table. Solvers build one and share it.
class DistanceTable {
public:
  DistanceTable() = default;

  explicit DistanceTable(const RkmInstance& inst)
      : n_clients_(inst.n_clients()), n_sites_(inst.n_facilities()),
        d_(static_cast<std::size_t>(n_clients_) * static_cast<std::size_t>(n_sites_)) {
    for (int c = 0; c < n_clients_; ++c) {
      for (int s = 0; s < n_sites_; ++s) {
        d_[index(c, s)] = inst.distance(c, s);
      }
    }
  }

  int n_clients() const noexcept { return n_clients_; }
  int n_sites() const noexcept { return n_sites_; }

  double operator()(int client, int site) const noexcept { return d_[index(client, site)]; }

  std::span<const double> row(int client) const noexcept {
    return {d_.data() + index(client, 0), static_cast<std::size_t>(n_sites_)};
  }

private:
  std::size_t index(int c, int s) const noexcept {
    return static_cast<std::size_t>(c) * static_cast<std::size_t>(n_sites_) +
           static_cast<std::size_t>(s);
  }

  int n_clients_ = 0;
  int n_sites_ = 0;
  std::vector<double> d_;
};

struct ObjectiveReport {
  double value = 0.0;
  std::vector<double> group_costs;
  int worst_group = 0; // lowest index among maximizers
};

namespace detail {

inline ObjectiveReport report_from_client_costs(std::span<const Group> groups,
                                                std::span<const double> client_cost) {
  ObjectiveReport rep;
  rep.group_costs.reserve(groups.size());
  for (const auto& g : groups) {
    double sum = 0.0;
    for (int c : g) {
      sum += client_cost[static_cast<std::size_t>(c)];
    }
    rep.group_costs.push_back(sum);
  }
  rep.value = rep.group_costs.empty() ? 0.0 : rep.group_costs.front();
  for (std::size_t i = 1; i < rep.group_costs.size(); ++i) {
    if (rep.group_costs[i] > rep.value) {
      rep.value = rep.group_costs[i];
      rep.worst_group = static_cast<int>(i);
    }
  }
  return rep;
}

inline void check_open_set(std::span<const int> open, int n_sites) {
  if (open.empty()) {
    fail(ErrorKind::Parameter, "no facilities open");
  }
  for (int s : open) {
    if (s < 0 || s >= n_sites) {
      fail(ErrorKind::Parameter, "open facility index " + std::to_string(s) + " out of range");
    }
  }
}

} // namespace detail

/// Max over groups of the summed client-to-nearest-open-site distance.
inline ObjectiveReport eval_objective(const DistanceTable& dist, std::span<const Group> groups,
                                      std::span<const int> open) {
  detail::check_open_set(open, dist.n_sites());
  std::vector<double> client_cost(static_cast<std::size_t>(dist.n_clients()));
  for (int c = 0; c < dist.n_clients(); ++c) {
    const auto row = dist.row(c);
    double best = std::numeric_limits<double>::infinity();
    for (int s : open) {
      best = std::min(best, row[static_cast<std::size_t>(s)]);
    }
    client_cost[static_cast<std::size_t>(c)] = best;
  }
  return detail::report_from_client_costs(groups, client_cost);
}

/// Evaluates directly from the metric; no distance table needed.
inline ObjectiveReport eval_objective(const RkmInstance& inst, const FacilitySolution& sol) {
  detail::check_open_set(sol.open, inst.n_facilities());
  std::vector<double> client_cost(static_cast<std::size_t>(inst.n_clients()));
  for (int c = 0; c < inst.n_clients(); ++c) {
    double best = std::numeric_limits<double>::infinity();
    for (int s : sol.open) {
      best = std::min(best, inst.distance(c, s));
    }
    client_cost[static_cast<std::size_t>(c)] = best;
  }
  return detail::report_from_client_costs(inst.groups, client_cost);
}

struct ValidationOptions {
  bool check_triangle = true; // O(n^3) on explicit metrics
  double tolerance = 1e-9;
};

/// Every violated invariant, in a fixed order. Empty means valid.
inline std::vector<std::string> validate_instance(const RkmInstance& inst,
                                                  ValidationOptions opt = {}) {
  std::vector<std::string> out;
  const int n_points = inst.metric.size();

  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ExplicitMetric>) {
          if (m.n < 0 || m.matrix.size() != static_cast<std::size_t>(m.n) * static_cast<std::size_t>(m.n)) {
            out.push_back("explicit metric matrix is not n x n");
            return;
          }
          auto at = [&](int i, int j) {
            return m.matrix[static_cast<std::size_t>(i) * static_cast<std::size_t>(m.n) +
                            static_cast<std::size_t>(j)];
          };
          for (int i = 0; i < m.n; ++i) {
            if (at(i, i) != 0.0) {
              out.push_back("nonzero diagonal at " + std::to_string(i));
            }
            for (int j = 0; j < m.n; ++j) {
              if (!(at(i, j) >= 0.0) || !std::isfinite(at(i, j))) {
                out.push_back("negative or non-finite distance at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
              }
              if (j > i && std::abs(at(i, j) - at(j, i)) > opt.tolerance) {
                out.push_back("asymmetric distance at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
              }
            }
          }
          if (opt.check_triangle) {
            for (int i = 0; i < m.n; ++i) {
              for (int j = 0; j < m.n; ++j) {
                for (int l = 0; l < m.n; ++l) {
                  if (at(i, j) > at(i, l) + at(l, j) + opt.tolerance) {
                    out.push_back("triangle inequality violated: d(" + std::to_string(i) + "," +
                                  std::to_string(j) + ") > d(" + std::to_string(i) + "," +
                                  std::to_string(l) + ") + d(" + std::to_string(l) + "," +
                                  std::to_string(j) + ")");
                    return;
                  }
                }
              }
            }
          }
        } else if constexpr (std::is_same_v<T, UniformMetric>) {
          if (m.n < 0) {
            out.push_back("uniform metric has negative size");
          }
        } else if constexpr (std::is_same_v<T, PlanarMetric>) {
          for (std::size_t i = 0; i < m.points.size(); ++i) {
            if (!std::isfinite(m.points[i][0]) || !std::isfinite(m.points[i][1])) {
              out.push_back("non-finite planar coordinate at point " + std::to_string(i));
            }
          }
        } else {
          for (std::size_t i = 0; i < m.coords.size(); ++i) {
            if (!std::isfinite(m.coords[i])) {
              out.push_back("non-finite line coordinate at point " + std::to_string(i));
            }
          }
        }
      },
      inst.metric.variant());

  if (inst.n_facilities() < 1) {
    out.push_back("no facility sites");
  }
  for (std::size_t s = 0; s < inst.facility_sites.size(); ++s) {
    const int p = inst.facility_sites[s];
    if (p < 0 || p >= n_points) {
      out.push_back("facility_sites[" + std::to_string(s) + "] out of metric range");
    }
  }
  for (std::size_t c = 0; c < inst.client_points.size(); ++c) {
    const int p = inst.client_points[c];
    if (p < 0 || p >= n_points) {
      out.push_back("client_points[" + std::to_string(c) + "] out of metric range");
    }
  }
  if (inst.groups.empty()) {
    out.push_back("no groups");
  }
  for (std::size_t g = 0; g < inst.groups.size(); ++g) {
    if (inst.groups[g].empty()) {
      out.push_back("groups[" + std::to_string(g) + "] is empty");
    }
    for (std::size_t i = 0; i < inst.groups[g].size(); ++i) {
      const int c = inst.groups[g][i];
      if (c < 0 || c >= inst.n_clients()) {
        out.push_back("groups[" + std::to_string(g) + "][" + std::to_string(i) +
                      "] is not a client index");
      }
    }
  }
  if (inst.k < 1) {
    out.push_back("k must be positive");
  }
  if (inst.k > inst.n_facilities()) {
    out.push_back("k exceeds facility count");
  }
  return out;
}

/// Checks |open| = k, range, and uniqueness. Empty means valid.
inline std::vector<std::string> validate_solution(const RkmInstance& inst,
                                                  const FacilitySolution& sol) {
  std::vector<std::string> out;
  if (static_cast<int>(sol.open.size()) != inst.k) {
    out.push_back("solution opens " + std::to_string(sol.open.size()) + " sites, expected k = " +
                  std::to_string(inst.k));
  }
  for (std::size_t i = 0; i < sol.open.size(); ++i) {
    if (sol.open[i] < 0 || sol.open[i] >= inst.n_facilities()) {
      out.push_back("open[" + std::to_string(i) + "] out of range");
    }
    if (i > 0 && sol.open[i] <= sol.open[i - 1]) {
      out.push_back("open sites not strictly increasing at " + std::to_string(i));
    }
  }
  return out;
}

} // namespace rkm
