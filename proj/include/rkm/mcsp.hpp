#pragma once

// Minimum Congestion Set Packing: choose exactly t sets so that the most
// covered element is covered as few times as possible. Equivalent to Robust
// k-Median on a uniform metric (closed sites <-> chosen sets).

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "rkm/combinatorics.hpp"
#include "rkm/core.hpp"
#include "rkm/error.hpp"

namespace rkm {

struct McspInstance {
  int m = 0;                          // universe [0, m)
  std::vector<std::vector<int>> sets; // sorted element lists
  int t = 1;

  int n_sets() const noexcept { return static_cast<int>(sets.size()); }
  bool operator==(const McspInstance&) const = default;
};

struct SetSelection {
  std::vector<int> chosen; // sorted set indices
  bool operator==(const SetSelection&) const = default;
};

struct CongestionReport {
  int max_congestion = 0;
  std::vector<int> per_element;
};

/// Violations of the instance invariants; empty means valid.
inline std::vector<std::string> validate_mcsp(const McspInstance& inst) {
  std::vector<std::string> out;
  if (inst.m < 1) {
    out.push_back("universe is empty");
  }
  std::vector<char> covered(static_cast<std::size_t>(std::max(inst.m, 0)), 0);
  for (std::size_t s = 0; s < inst.sets.size(); ++s) {
    const auto& set = inst.sets[s];
    if (set.empty()) {
      out.push_back("sets[" + std::to_string(s) + "] is empty");
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
      const int e = set[i];
      if (e < 0 || e >= inst.m) {
        out.push_back("sets[" + std::to_string(s) + "][" + std::to_string(i) + "] out of universe");
        continue;
      }
      if (i > 0 && e <= set[i - 1]) {
        out.push_back("sets[" + std::to_string(s) + "] not strictly increasing");
      }
      covered[static_cast<std::size_t>(e)] = 1;
    }
  }
  for (int e = 0; e < inst.m; ++e) {
    if (!covered[static_cast<std::size_t>(e)]) {
      out.push_back("element " + std::to_string(e) + " is not covered by any set");
      break;
    }
  }
  if (inst.t < 1) {
    out.push_back("t must be positive");
  }
  if (inst.t > inst.n_sets()) {
    out.push_back("t exceeds the number of sets");
  }
  return out;
}

/// Per-element cover counts for an arbitrary list of set indices.
inline CongestionReport congestion_of(const McspInstance& inst, std::span<const int> chosen) {
  CongestionReport rep;
  rep.per_element.assign(static_cast<std::size_t>(inst.m), 0);
  for (int s : chosen) {
    if (s < 0 || s >= inst.n_sets()) {
      fail(ErrorKind::Parameter, "set index " + std::to_string(s) + " out of range");
    }
    for (int e : inst.sets[static_cast<std::size_t>(s)]) {
      const int c = ++rep.per_element[static_cast<std::size_t>(e)];
      rep.max_congestion = std::max(rep.max_congestion, c);
    }
  }
  return rep;
}

inline CongestionReport congestion(const McspInstance& inst, const SetSelection& sel) {
  if (static_cast<int>(sel.chosen.size()) != inst.t) {
    fail(ErrorKind::Parameter, "invalid selection: " + std::to_string(sel.chosen.size()) +
                                   " sets chosen, t = " + std::to_string(inst.t));
  }
  auto sorted = sel.chosen;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorKind::Parameter, "invalid selection: repeated set index");
  }
  return congestion_of(inst, sel.chosen);
}

/// Sites closed by a facility solution, as a set selection (and back).
inline SetSelection selection_from_open(int n_sets, std::span<const int> open) {
  std::vector<char> is_open(static_cast<std::size_t>(n_sets), 0);
  for (int s : open) {
    is_open[static_cast<std::size_t>(s)] = 1;
  }
  SetSelection sel;
  for (int s = 0; s < n_sets; ++s) {
    if (!is_open[static_cast<std::size_t>(s)]) {
      sel.chosen.push_back(s);
    }
  }
  return sel;
}

inline FacilitySolution open_from_selection(int n_sets, const SetSelection& sel) {
  FacilitySolution sol;
  const auto closed = selection_from_open(n_sets, sel.chosen);
  sol.open = closed.chosen; // complement of the complement
  return sol;
}

/// Client groups S(e) = {sites of sets containing e}, one per covered element.
/// `element_of_group` maps group index back to the element.
struct ElementGroups {
  std::vector<Group> groups;
  std::vector<int> element_of_group;
};

inline ElementGroups element_groups(const McspInstance& inst) {
  std::vector<Group> members(static_cast<std::size_t>(inst.m));
  for (int s = 0; s < inst.n_sets(); ++s) {
    for (int e : inst.sets[static_cast<std::size_t>(s)]) {
      members[static_cast<std::size_t>(e)].push_back(s);
    }
  }
  ElementGroups out;
  for (int e = 0; e < inst.m; ++e) {
    if (!members[static_cast<std::size_t>(e)].empty()) {
      out.groups.push_back(std::move(members[static_cast<std::size_t>(e)]));
      out.element_of_group.push_back(e);
    }
  }
  return out;
}

/// Uniform-metric Robust k-Median instance with the same optimum: one site per
/// set, one group per element, k = |sets| - t. Clients are the sites
/// themselves (client i sits on site i).
inline RkmInstance mcsp_to_rkm(const McspInstance& inst) {
  if (auto v = validate_mcsp(inst); !v.empty()) {
    fail(ErrorKind::Data, "invalid MCSP instance: " + v.front());
  }
  if (inst.t == inst.n_sets()) {
    fail(ErrorKind::Parameter, "no facility may be opened (t equals the number of sets)");
  }
  RkmInstance out;
  const int n = inst.n_sets();
  out.metric = UniformMetric{n};
  out.facility_sites.resize(static_cast<std::size_t>(n));
  std::iota(out.facility_sites.begin(), out.facility_sites.end(), 0);
  out.client_points = out.facility_sites;
  out.groups = element_groups(inst).groups;
  out.k = n - inst.t;
  return out;
}

/// Inverse direction: a uniform instance whose clients all sit on sites
/// becomes an MCSP instance with one element per group and one set per site.
inline McspInstance rkm_uniform_to_mcsp(const RkmInstance& inst) {
  if (!inst.metric.is<UniformMetric>()) {
    fail(ErrorKind::Parameter, std::string("unsupported metric '") + inst.metric.type_name() +
                                   "': only uniform metrics reduce to MCSP");
  }
  if (auto v = validate_instance(inst); !v.empty()) {
    fail(ErrorKind::Data, "invalid instance: " + v.front());
  }
  if (inst.k == inst.n_facilities()) {
    fail(ErrorKind::Parameter, "k equals the facility count, so t = 0");
  }
  std::vector<int> site_at_point(static_cast<std::size_t>(inst.metric.size()), -1);
  for (int s = 0; s < inst.n_facilities(); ++s) {
    auto& slot = site_at_point[static_cast<std::size_t>(inst.facility_sites[static_cast<std::size_t>(s)])];
    if (slot != -1) {
      fail(ErrorKind::Data, "two facility sites share point " +
                                std::to_string(inst.facility_sites[static_cast<std::size_t>(s)]));
    }
    slot = s;
  }
  McspInstance out;
  out.m = inst.n_groups();
  out.sets.resize(static_cast<std::size_t>(inst.n_facilities()));
  for (int g = 0; g < inst.n_groups(); ++g) {
    std::vector<int> sites;
    for (int c : inst.groups[static_cast<std::size_t>(g)]) {
      const int s = site_at_point[static_cast<std::size_t>(inst.client_points[static_cast<std::size_t>(c)])];
      if (s == -1) {
        fail(ErrorKind::Data, "client " + std::to_string(c) + " does not sit on a facility site");
      }
      sites.push_back(s);
    }
    std::sort(sites.begin(), sites.end());
    if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
      fail(ErrorKind::Data, "groups[" + std::to_string(g) +
                                "] has two clients at one location; MCSP sets cannot count multiplicity");
    }
    for (int s : sites) {
      out.sets[static_cast<std::size_t>(s)].push_back(g);
    }
  }
  for (int s = 0; s < inst.n_facilities(); ++s) {
    if (out.sets[static_cast<std::size_t>(s)].empty()) {
      fail(ErrorKind::Data, "site " + std::to_string(s) + " is used by no group and would map to an empty set");
    }
  }
  out.t = inst.n_facilities() - inst.k;
  return out;
}

inline constexpr std::uint64_t kDefaultGapElementCap = 1'000'000;

/// eta = d^2 indices; elements are the d-subsets of [0, eta) in lexicographic
/// order; set i holds every element containing i; t = d. Every element lies
/// in exactly d sets, so y = 1/d is fractionally feasible with congestion 1,
/// while any d chosen sets all contain the element made of their indices.
inline McspInstance build_integrality_gap(int d, std::uint64_t element_cap = kDefaultGapElementCap) {
  if (d < 2) {
    fail(ErrorKind::Parameter, "integrality-gap parameter d must be at least 2");
  }
  const int eta = d * d;
  const std::uint64_t m = binomial(static_cast<std::uint64_t>(eta), static_cast<std::uint64_t>(d));
  if (m > element_cap) {
    fail(ErrorKind::Size, "integrality-gap instance has " + std::to_string(m) +
                              " elements, above the cap of " + std::to_string(element_cap));
  }
  McspInstance out;
  out.m = static_cast<int>(m);
  out.sets.resize(static_cast<std::size_t>(eta));
  int e = 0;
  for_each_combination(eta, d, [&](const std::vector<int>& subset) {
    for (int i : subset) {
      out.sets[static_cast<std::size_t>(i)].push_back(e);
    }
    ++e;
  });
  out.t = d;
  return out;
}

inline constexpr std::uint64_t kDefaultMcspEnumerationCap = 10'000'000;

struct McspOptimum {
  int opt_value = 0;
  SetSelection witness; // lexicographically smallest optimal selection
};

inline McspOptimum brute_force_mcsp(const McspInstance& inst,
                                    std::uint64_t cap = kDefaultMcspEnumerationCap) {
  const auto count = binomial(static_cast<std::uint64_t>(inst.n_sets()), static_cast<std::uint64_t>(inst.t));
  if (count > cap) {
    fail(ErrorKind::Size, "MCSP enumeration of " + std::to_string(count) + " selections exceeds cap " +
                              std::to_string(cap));
  }
  if (inst.t < 1 || inst.t > inst.n_sets()) {
    fail(ErrorKind::Parameter, "t out of range");
  }
  McspOptimum best;
  best.opt_value = std::numeric_limits<int>::max();
  std::vector<int> counts(static_cast<std::size_t>(inst.m), 0);
  for_each_combination(inst.n_sets(), inst.t, [&](const std::vector<int>& comb) {
    int worst = 0;
    for (int s : comb) {
      for (int e : inst.sets[static_cast<std::size_t>(s)]) {
        worst = std::max(worst, ++counts[static_cast<std::size_t>(e)]);
      }
    }
    for (int s : comb) {
      for (int e : inst.sets[static_cast<std::size_t>(s)]) {
        counts[static_cast<std::size_t>(e)] = 0;
      }
    }
    if (worst < best.opt_value) {
      best.opt_value = worst;
      best.witness.chosen = comb;
    }
  });
  return best;
}

} // namespace rkm
