#pragma once

// Label Cover -> MCSP -> line-metric Robust k-Median.
//
// Every edge h gets its own partition system over a ground block U_h of m*
// elements (element index h * m* + z). Set X(v, l) is the union, over edges
// h containing v, of the part A^{j(v)}_{pi_h^{j(v)}(l)}(h). One set is created
// per (vertex, label), vertices in id order and labels ascending, and t = |V|.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rkm/core.hpp"
#include "rkm/error.hpp"
#include "rkm/label_cover.hpp"
#include "rkm/mcsp.hpp"
#include "rkm/partition_system.hpp"
#include "rkm/rng.hpp"

namespace rkm {

struct SetOrigin {
  int vertex = 0;
  int label = 0;
  bool operator==(const SetOrigin&) const = default;
};

struct McspProvenance {
  std::vector<SetOrigin> set_origin; // set index -> (v, l)
  int elements_per_edge = 0;         // m*; element e comes from edge e / m*, ground element e % m*
  int n_edges = 0;

  std::pair<int, int> element_origin(int e) const noexcept {
    return {e / elements_per_edge, e % elements_per_edge};
  }
  bool operator==(const McspProvenance&) const = default;
};

struct LcReductionOptions {
  std::optional<int> z_size; // default_z_size(r, n_colors, d) when unset
  double d = 3.0;
  VerifyMode verify = VerifyMode::Auto;
};

struct LcReduction {
  McspInstance mcsp;
  McspProvenance provenance;
  std::vector<PartitionSystem> systems; // per edge
  std::vector<int> set_offset;          // first set index of each vertex
  int uncovered_elements = 0;
};

/// Partition systems are built with seed + h for edge h (construction retries
/// derive further seeds from it); a construction failure propagates.
inline LcReduction lc_to_mcsp(const LabelCoverInstance& lc, std::uint64_t seed, const LcReductionOptions& opt = {}) {
  require_valid(lc);
  const auto part_of = lc.part_of();
  const int n = lc.n_vertices();
  const auto deg = vertex_degrees(lc);
  for (int v = 0; v < n; ++v) {
    if (deg[static_cast<std::size_t>(v)] == 0) {
      fail(ErrorKind::Data, "vertex " + std::to_string(v) + " has no incident edge");
    }
  }
  if (lc.edges.empty()) {
    fail(ErrorKind::Data, "label cover instance has no edges");
  }
  const int colors = std::max(lc.n_colors, lc.r);
  const int z = opt.z_size ? *opt.z_size : default_z_size(lc.r, colors, opt.d);
  const auto m64 = static_cast<std::uint64_t>(z) * static_cast<std::uint64_t>(lc.n_edges());
  if (m64 > 200'000'000ULL) {
    fail(ErrorKind::Size, "universe of " + std::to_string(m64) + " elements is too large");
  }

  LcReduction out;
  out.provenance.elements_per_edge = z;
  out.provenance.n_edges = lc.n_edges();
  out.set_offset.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    out.set_offset[static_cast<std::size_t>(v)] = static_cast<int>(out.provenance.set_origin.size());
    for (int l = 0; l < lc.labels_of(v, part_of); ++l) {
      out.provenance.set_origin.push_back({v, l});
    }
  }
  auto& mcsp = out.mcsp;
  mcsp.m = static_cast<int>(m64);
  mcsp.t = n;
  mcsp.sets.resize(out.provenance.set_origin.size());

  PartitionBuildOptions popt;
  popt.z_size = z;
  popt.verify = opt.verify;
  std::vector<char> covered(static_cast<std::size_t>(z));
  for (int h = 0; h < lc.n_edges(); ++h) {
    auto built = build_partition_system(lc.r, colors, seed + static_cast<std::uint64_t>(h), popt);
    const auto& ps = built.system;
    const int base = h * z;
    std::fill(covered.begin(), covered.end(), 0);
    for (int j = 0; j < lc.r; ++j) {
      const int v = lc.edges[static_cast<std::size_t>(h)][static_cast<std::size_t>(j)];
      const auto& proj = lc.projections[static_cast<std::size_t>(h)][static_cast<std::size_t>(j)];
      for (std::size_t l = 0; l < proj.size(); ++l) {
        auto& set = mcsp.sets[static_cast<std::size_t>(out.set_offset[static_cast<std::size_t>(v)]) + l];
        for (int e = 0; e < z; ++e) {
          if (ps.part(proj[l], e) == j) {
            set.push_back(base + e);
            covered[static_cast<std::size_t>(e)] = 1;
          }
        }
      }
    }
    out.uncovered_elements += static_cast<int>(std::count(covered.begin(), covered.end(), 0));
    out.systems.push_back(std::move(built.system));
  }
  // Edges are processed in order, so each set's element list is already sorted.
  return out;
}

inline void require_provenance(const McspInstance& mcsp, const McspProvenance& prov) {
  if (static_cast<int>(prov.set_origin.size()) != mcsp.n_sets() || prov.elements_per_edge < 1 ||
      static_cast<long long>(prov.elements_per_edge) * prov.n_edges != mcsp.m) {
    fail(ErrorKind::Parameter, "provenance does not describe this MCSP instance");
  }
}

/// Selection {X(v, sigma(v)) : v in V}.
inline SetSelection witness_from_labeling(const McspInstance& mcsp, const McspProvenance& prov, const Labeling& lab) {
  require_provenance(mcsp, prov);
  SetSelection sel;
  for (int s = 0; s < mcsp.n_sets(); ++s) {
    const auto& o = prov.set_origin[static_cast<std::size_t>(s)];
    if (o.vertex < 0 || o.vertex >= static_cast<int>(lab.sigma.size())) {
      fail(ErrorKind::Parameter, "labeling does not cover vertex " + std::to_string(o.vertex));
    }
    if (lab.sigma[static_cast<std::size_t>(o.vertex)] == o.label) {
      sel.chosen.push_back(s);
    }
  }
  return sel;
}

/// L_v = labels l with X(v, l) chosen; sigma(v) is uniform over L_v, or label
/// 0 (the lowest) when L_v is empty. Vertices are visited in id order and
/// only non-empty palettes consume random draws.
inline Labeling decode_labeling(const LabelCoverInstance& lc, const SetSelection& sel, const McspProvenance& prov,
                                std::uint64_t seed) {
  const int n = lc.n_vertices();
  std::vector<std::vector<int>> palette(static_cast<std::size_t>(n));
  for (int s : sel.chosen) {
    if (s < 0 || s >= static_cast<int>(prov.set_origin.size())) {
      fail(ErrorKind::Parameter, "selected set " + std::to_string(s) + " has no provenance");
    }
    const auto& o = prov.set_origin[static_cast<std::size_t>(s)];
    if (o.vertex < 0 || o.vertex >= n) {
      fail(ErrorKind::Parameter, "provenance names unknown vertex " + std::to_string(o.vertex));
    }
    palette[static_cast<std::size_t>(o.vertex)].push_back(o.label);
  }
  Rng rng(seed);
  Labeling lab;
  lab.sigma.resize(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    auto& p = palette[static_cast<std::size_t>(v)];
    if (p.empty()) {
      continue;
    }
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    lab.sigma[static_cast<std::size_t>(v)] = p[static_cast<std::size_t>(rng.below(p.size()))];
  }
  return lab;
}

/// lambda(h) = number of chosen sets meeting the block U_h.
inline std::vector<int> edge_loads(const McspInstance& mcsp, const McspProvenance& prov, std::span<const int> chosen) {
  require_provenance(mcsp, prov);
  std::vector<int> load(static_cast<std::size_t>(prov.n_edges), 0);
  std::vector<int> last_set(static_cast<std::size_t>(prov.n_edges), -1);
  for (int s : chosen) {
    for (int e : mcsp.sets[static_cast<std::size_t>(s)]) {
      const int h = e / prov.elements_per_edge;
      if (last_set[static_cast<std::size_t>(h)] != s) {
        last_set[static_cast<std::size_t>(h)] = s;
        ++load[static_cast<std::size_t>(h)];
      }
    }
  }
  return load;
}

struct LineEmbedding {
  std::vector<double> position; // facility site -> coordinate
  double block_gap = 2.0;
  bool operator==(const LineEmbedding&) const = default;
};

struct LineReduction {
  RkmInstance instance;
  LineEmbedding embedding;
  std::vector<int> element_of_group;
};

/// Sites on a line, one per set: vertex blocks in vertex order, labels at unit
/// spacing inside a block, consecutive blocks exactly 2 apart. Every site also
/// hosts one client; the group of element e holds the clients at the sites of
/// sets containing e (uncovered elements get no group). k = |sets| - t.
inline LineReduction mcsp_to_line_rkm(const McspInstance& mcsp, const McspProvenance& prov) {
  if (prov.set_origin.size() != mcsp.sets.size()) {
    fail(ErrorKind::Parameter, "line embedding needs the (vertex, label) provenance of every set");
  }
  if (mcsp.t >= mcsp.n_sets()) {
    fail(ErrorKind::Parameter, "no facility may be opened (t equals the number of sets)");
  }
  LineReduction out;
  auto& pos = out.embedding.position;
  const double gap = out.embedding.block_gap;
  for (int s = 0; s < mcsp.n_sets(); ++s) {
    const auto& o = prov.set_origin[static_cast<std::size_t>(s)];
    if (s == 0) {
      if (o.label != 0) {
        fail(ErrorKind::Parameter, "sets of a vertex must list labels 0, 1, ... consecutively");
      }
      pos.push_back(0.0);
      continue;
    }
    const auto& prev = prov.set_origin[static_cast<std::size_t>(s - 1)];
    if (o.vertex == prev.vertex && o.label == prev.label + 1) {
      pos.push_back(pos.back() + 1.0);
    } else if (o.vertex > prev.vertex && o.label == 0) {
      pos.push_back(pos.back() + gap);
    } else {
      fail(ErrorKind::Parameter, "sets must be ordered by vertex, labels 0, 1, ... consecutively");
    }
  }
  auto& inst = out.instance;
  inst.metric = LineMetric{pos};
  inst.facility_sites.resize(pos.size());
  std::iota(inst.facility_sites.begin(), inst.facility_sites.end(), 0);
  inst.client_points = inst.facility_sites;
  auto eg = element_groups(mcsp);
  inst.groups = std::move(eg.groups);
  out.element_of_group = std::move(eg.element_of_group);
  inst.k = mcsp.n_sets() - mcsp.t;
  return out;
}

} // namespace rkm
