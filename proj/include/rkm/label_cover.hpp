#pragma once

// r-hypergraph Label Cover. Vertices carry global ids 0..n-1 and belong to
// exactly one of r parts; labels of part j are 0..label_sizes[j]-1.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "rkm/error.hpp"
#include "rkm/rng.hpp"

namespace rkm {

struct LabelCoverInstance {
  int r = 0;
  std::vector<std::vector<int>> parts; // parts[j] = vertex ids of V_j
  std::vector<int> label_sizes;        // |L_j|
  int n_colors = 0;
  std::vector<std::vector<int>> edges; // edges[h][j] = the vertex of part j in edge h
  // projections[h][j][l] = color of label l of edges[h][j] under pi_h^j
  std::vector<std::vector<std::vector<int>>> projections;

  int n_vertices() const noexcept {
    int n = 0;
    for (const auto& p : parts) {
      n += static_cast<int>(p.size());
    }
    return n;
  }
  int n_edges() const noexcept { return static_cast<int>(edges.size()); }

  /// part_of[v] = j(v). Assumes a valid instance.
  std::vector<int> part_of() const {
    std::vector<int> out(static_cast<std::size_t>(n_vertices()), -1);
    for (std::size_t j = 0; j < parts.size(); ++j) {
      for (int v : parts[j]) {
        out[static_cast<std::size_t>(v)] = static_cast<int>(j);
      }
    }
    return out;
  }

  int labels_of(int v, const std::vector<int>& part_of) const {
    return label_sizes[static_cast<std::size_t>(part_of[static_cast<std::size_t>(v)])];
  }

  bool operator==(const LabelCoverInstance&) const = default;
};

struct Labeling {
  std::vector<int> sigma; // sigma[v] in [0, |L_j(v)|)
  bool operator==(const Labeling&) const = default;
};

inline std::vector<std::string> validate_label_cover(const LabelCoverInstance& lc) {
  std::vector<std::string> out;
  if (lc.r < 2) {
    out.push_back("r must be at least 2");
  }
  if (static_cast<int>(lc.parts.size()) != lc.r) {
    out.push_back("expected " + std::to_string(lc.r) + " parts");
  }
  if (static_cast<int>(lc.label_sizes.size()) != lc.r) {
    out.push_back("expected " + std::to_string(lc.r) + " label sizes");
  }
  if (lc.n_colors < 1) {
    out.push_back("n_colors must be positive");
  }
  if (!out.empty()) {
    return out;
  }
  for (int j = 0; j < lc.r; ++j) {
    if (lc.label_sizes[static_cast<std::size_t>(j)] < 1) {
      out.push_back("label_sizes[" + std::to_string(j) + "] must be positive");
    }
  }
  const int n = lc.n_vertices();
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (int j = 0; j < lc.r; ++j) {
    const auto& p = lc.parts[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const int v = p[i];
      if (v < 0 || v >= n) {
        out.push_back("parts[" + std::to_string(j) + "][" + std::to_string(i) + "] out of range");
      } else if (owner[static_cast<std::size_t>(v)] != -1) {
        out.push_back("vertex " + std::to_string(v) + " listed twice");
      } else {
        owner[static_cast<std::size_t>(v)] = j;
      }
    }
  }
  if (!out.empty()) {
    return out;
  }
  if (lc.projections.size() != lc.edges.size()) {
    out.push_back("one projection table per edge required");
    return out;
  }
  for (std::size_t h = 0; h < lc.edges.size(); ++h) {
    const auto& e = lc.edges[h];
    const std::string at = "edges[" + std::to_string(h) + "]";
    if (static_cast<int>(e.size()) != lc.r) {
      out.push_back(at + " must have one vertex per part");
      continue;
    }
    bool ok = true;
    for (int j = 0; j < lc.r; ++j) {
      const int v = e[static_cast<std::size_t>(j)];
      if (v < 0 || v >= n || owner[static_cast<std::size_t>(v)] != j) {
        out.push_back(at + "[" + std::to_string(j) + "] is not a vertex of part " + std::to_string(j));
        ok = false;
      }
    }
    if (!ok) {
      continue;
    }
    const auto& pr = lc.projections[h];
    if (static_cast<int>(pr.size()) != lc.r) {
      out.push_back("projections[" + std::to_string(h) + "] must have one table per part");
      continue;
    }
    for (int j = 0; j < lc.r; ++j) {
      const auto& tab = pr[static_cast<std::size_t>(j)];
      const std::string pat = "projections[" + std::to_string(h) + "][" + std::to_string(j) + "]";
      if (static_cast<int>(tab.size()) != lc.label_sizes[static_cast<std::size_t>(j)]) {
        out.push_back(pat + " must map every label");
        continue;
      }
      for (std::size_t l = 0; l < tab.size(); ++l) {
        if (tab[l] < 0 || tab[l] >= lc.n_colors) {
          out.push_back(pat + "[" + std::to_string(l) + "] is not a color");
        }
      }
    }
  }
  return out;
}

inline void require_valid(const LabelCoverInstance& lc) {
  if (auto v = validate_label_cover(lc); !v.empty()) {
    fail(ErrorKind::Data, "invalid label cover instance: " + v.front());
  }
}

inline void require_total(const LabelCoverInstance& lc, const Labeling& lab) {
  const auto part_of = lc.part_of();
  if (static_cast<int>(lab.sigma.size()) != lc.n_vertices()) {
    fail(ErrorKind::Parameter, "labeling must assign every vertex");
  }
  for (std::size_t v = 0; v < lab.sigma.size(); ++v) {
    const int l = lab.sigma[v];
    if (l < 0 || l >= lc.labels_of(static_cast<int>(v), part_of)) {
      fail(ErrorKind::Parameter, "label of vertex " + std::to_string(v) + " outside its label set");
    }
  }
}

struct SatisfactionStats {
  double strong_fraction = 0.0; // every pair of member labels projects to one color
  double weak_fraction = 0.0;   // some pair does
  int strong_edges = 0;
  int weak_edges = 0;
};

inline SatisfactionStats satisfaction_stats(const LabelCoverInstance& lc, const Labeling& lab) {
  require_total(lc, lab);
  SatisfactionStats st;
  std::vector<int> colors(static_cast<std::size_t>(lc.r));
  for (std::size_t h = 0; h < lc.edges.size(); ++h) {
    for (int j = 0; j < lc.r; ++j) {
      const int v = lc.edges[h][static_cast<std::size_t>(j)];
      colors[static_cast<std::size_t>(j)] =
          lc.projections[h][static_cast<std::size_t>(j)][static_cast<std::size_t>(lab.sigma[static_cast<std::size_t>(v)])];
    }
    const bool strong = std::all_of(colors.begin(), colors.end(), [&](int c) { return c == colors.front(); });
    auto sorted = colors;
    std::sort(sorted.begin(), sorted.end());
    const bool weak = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
    st.strong_edges += strong;
    st.weak_edges += weak;
  }
  if (!lc.edges.empty()) {
    st.strong_fraction = static_cast<double>(st.strong_edges) / lc.n_edges();
    st.weak_fraction = static_cast<double>(st.weak_edges) / lc.n_edges();
  }
  return st;
}

/// Vertex degrees in the hypergraph.
inline std::vector<int> vertex_degrees(const LabelCoverInstance& lc) {
  std::vector<int> deg(static_cast<std::size_t>(lc.n_vertices()), 0);
  for (const auto& e : lc.edges) {
    for (int v : e) {
      ++deg[static_cast<std::size_t>(v)];
    }
  }
  return deg;
}

struct PlantedLabelCover {
  LabelCoverInstance lc;
  Labeling planted; // strongly satisfies every edge
};

struct ToyLabelCoverSpec {
  int r = 2;
  int vertices_per_part = 2;
  int labels = 2;   // |L_j| for every part
  int n_colors = 2;
  int n_edges = 3;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_toy_spec(const ToyLabelCoverSpec& s) {
  if (s.r < 2 || s.vertices_per_part < 1 || s.labels < 1 || s.n_colors < 1 || s.n_edges < 1) {
    fail(ErrorKind::Parameter, "toy label cover needs r >= 2 and positive sizes");
  }
}

inline LabelCoverInstance toy_skeleton(const ToyLabelCoverSpec& s) {
  LabelCoverInstance lc;
  lc.r = s.r;
  lc.n_colors = s.n_colors;
  lc.label_sizes.assign(static_cast<std::size_t>(s.r), s.labels);
  lc.parts.resize(static_cast<std::size_t>(s.r));
  int id = 0;
  for (auto& p : lc.parts) {
    for (int i = 0; i < s.vertices_per_part; ++i) {
      p.push_back(id++);
    }
  }
  return lc;
}

} // namespace detail

/// Random r-partite instance with a planted labeling: each edge draws a color
/// c, the planted label of every member projects to c, and the remaining
/// labels project to uniform colors. The first vertices_per_part edges pair
/// the i-th vertex of every part, so each vertex has at least one edge when
/// n_edges >= vertices_per_part; later edges pick members uniformly.
inline PlantedLabelCover planted_label_cover(const ToyLabelCoverSpec& s) {
  detail::check_toy_spec(s);
  Rng rng(s.seed);
  PlantedLabelCover out;
  auto& lc = out.lc;
  lc = detail::toy_skeleton(s);
  const int n = lc.n_vertices();
  for (int v = 0; v < n; ++v) {
    out.planted.sigma.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(s.labels))));
  }
  for (int h = 0; h < s.n_edges; ++h) {
    std::vector<int> e;
    for (int j = 0; j < s.r; ++j) {
      const int i = h < s.vertices_per_part ? h : static_cast<int>(rng.below(static_cast<std::uint64_t>(s.vertices_per_part)));
      e.push_back(lc.parts[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    }
    const int c = static_cast<int>(rng.below(static_cast<std::uint64_t>(s.n_colors)));
    std::vector<std::vector<int>> proj(static_cast<std::size_t>(s.r));
    for (int j = 0; j < s.r; ++j) {
      const int planted = out.planted.sigma[static_cast<std::size_t>(e[static_cast<std::size_t>(j)])];
      for (int l = 0; l < s.labels; ++l) {
        proj[static_cast<std::size_t>(j)].push_back(
            l == planted ? c : static_cast<int>(rng.below(static_cast<std::uint64_t>(s.n_colors))));
      }
    }
    lc.edges.push_back(std::move(e));
    lc.projections.push_back(std::move(proj));
  }
  return out;
}

/// Vertex-regular instance: `degree` rounds, each shuffling every part and
/// joining the i-th vertices of all parts into one edge. Every vertex ends up
/// in exactly `degree` edges; projections are uniform colors.
inline LabelCoverInstance regular_label_cover(const ToyLabelCoverSpec& s, int degree) {
  detail::check_toy_spec(s);
  if (degree < 1) {
    fail(ErrorKind::Parameter, "degree must be positive");
  }
  Rng rng(s.seed);
  auto lc = detail::toy_skeleton(s);
  for (int round = 0; round < degree; ++round) {
    auto order = lc.parts;
    for (auto& p : order) {
      rng.shuffle(p);
    }
    for (int i = 0; i < s.vertices_per_part; ++i) {
      std::vector<int> e;
      std::vector<std::vector<int>> proj(static_cast<std::size_t>(s.r));
      for (int j = 0; j < s.r; ++j) {
        e.push_back(order[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        for (int l = 0; l < s.labels; ++l) {
          proj[static_cast<std::size_t>(j)].push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(s.n_colors))));
        }
      }
      lc.edges.push_back(std::move(e));
      lc.projections.push_back(std::move(proj));
    }
  }
  return lc;
}

} // namespace rkm
