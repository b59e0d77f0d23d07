#pragma once

// JSON forms of instances, MCSP and Label Cover instances, partition systems,
// certificates and LP solutions. Every document carries "format_version": 1
// and a "type" tag. Parse errors name the offending path, e.g. "groups[3][1]".

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rkm/core.hpp"
#include "rkm/error.hpp"
#include "rkm/generators.hpp"
#include "rkm/label_cover.hpp"
#include "rkm/lc_reduction.hpp"
#include "rkm/lp_model.hpp"
#include "rkm/mcsp.hpp"
#include "rkm/partition_system.hpp"

namespace rkm {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

namespace io_detail {

[[noreturn]] inline void schema_error(const std::string& path, const std::string& reason) {
  fail(ErrorKind::Data, (path.empty() ? std::string("document") : path) + ": " + reason);
}

inline std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline std::string child(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const Json& field(const Json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) {
    schema_error(path, "expected an object");
  }
  const auto it = j.find(key);
  if (it == j.end()) {
    schema_error(child(path, key), "missing field");
  }
  return *it;
}

inline long long as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) {
    schema_error(path, "expected an integer");
  }
  return j.get<long long>();
}

inline int as_int32(const Json& j, const std::string& path) {
  const auto v = as_int(j, path);
  if (v < -2147483647LL || v > 2147483647LL) {
    schema_error(path, "integer out of range");
  }
  return static_cast<int>(v);
}

inline double as_double(const Json& j, const std::string& path) {
  if (!j.is_number()) {
    schema_error(path, "expected a number");
  }
  return j.get<double>();
}

inline const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) {
    schema_error(path, "expected an array");
  }
  return j;
}

inline std::vector<int> int_list(const Json& j, const std::string& path) {
  as_array(j, path);
  std::vector<int> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_int32(j[i], child(path, i)));
  }
  return out;
}

inline std::vector<std::vector<int>> int_lists(const Json& j, const std::string& path) {
  as_array(j, path);
  std::vector<std::vector<int>> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(int_list(j[i], child(path, i)));
  }
  return out;
}

inline void check_index(int v, int bound, const std::string& path, const std::string& what) {
  if (v < 0 || v >= bound) {
    schema_error(path, what + " " + std::to_string(v) + " out of range [0, " + std::to_string(bound) + ")");
  }
}

inline void check_header(const Json& j, const std::string& type) {
  if (!j.is_object()) {
    schema_error("", "expected a JSON object");
  }
  const auto v = as_int(field(j, "", "format_version"), "format_version");
  if (v != kFormatVersion) {
    schema_error("format_version", "unsupported version " + std::to_string(v));
  }
  const auto& t = field(j, "", "type");
  if (!t.is_string() || t.get<std::string>() != type) {
    schema_error("type", "expected \"" + type + "\"");
  }
}

inline Json header(const std::string& type) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["type"] = type;
  return j;
}

} // namespace io_detail

// ---- Robust k-Median instances ------------------------------------------

inline Json metric_to_json(const Metric& m) {
  Json j;
  j["type"] = m.type_name();
  if (m.is<UniformMetric>()) {
    j["n"] = m.as<UniformMetric>().n;
  } else if (m.is<ExplicitMetric>()) {
    const auto& e = m.as<ExplicitMetric>();
    j["n"] = e.n;
    Json rows = Json::array();
    for (int a = 0; a < e.n; ++a) {
      Json row = Json::array();
      for (int b = 0; b < e.n; ++b) {
        row.push_back(e.matrix[static_cast<std::size_t>(a) * static_cast<std::size_t>(e.n) + static_cast<std::size_t>(b)]);
      }
      rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
  } else if (m.is<PlanarMetric>()) {
    Json pts = Json::array();
    for (const auto& p : m.as<PlanarMetric>().points) {
      pts.push_back(Json::array({p[0], p[1]}));
    }
    j["points"] = std::move(pts);
  } else {
    j["coords"] = m.as<LineMetric>().coords;
  }
  return j;
}

inline Metric metric_from_json(const Json& j, const std::string& path) {
  using namespace io_detail;
  const auto& t = field(j, path, "type");
  if (!t.is_string()) {
    schema_error(child(path, "type"), "expected a string");
  }
  const auto type = t.get<std::string>();
  if (type == "uniform") {
    const int n = as_int32(field(j, path, "n"), child(path, "n"));
    if (n < 0) {
      schema_error(child(path, "n"), "must be non-negative");
    }
    return UniformMetric{n};
  }
  if (type == "explicit") {
    const int n = as_int32(field(j, path, "n"), child(path, "n"));
    if (n < 0) {
      schema_error(child(path, "n"), "must be non-negative");
    }
    const auto mpath = child(path, "matrix");
    const auto& rows = as_array(field(j, path, "matrix"), mpath);
    if (static_cast<int>(rows.size()) != n) {
      schema_error(mpath, "expected " + std::to_string(n) + " rows");
    }
    ExplicitMetric e{n, {}};
    e.matrix.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (std::size_t a = 0; a < rows.size(); ++a) {
      const auto& row = as_array(rows[a], child(mpath, a));
      if (static_cast<int>(row.size()) != n) {
        schema_error(child(mpath, a), "expected " + std::to_string(n) + " entries");
      }
      for (std::size_t b = 0; b < row.size(); ++b) {
        e.matrix.push_back(as_double(row[b], child(child(mpath, a), b)));
      }
    }
    return e;
  }
  if (type == "planar") {
    const auto ppath = child(path, "points");
    const auto& pts = as_array(field(j, path, "points"), ppath);
    PlanarMetric p;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& pt = as_array(pts[i], child(ppath, i));
      if (pt.size() != 2) {
        schema_error(child(ppath, i), "expected [x, y]");
      }
      p.points.push_back({as_double(pt[0], child(child(ppath, i), 0)), as_double(pt[1], child(child(ppath, i), 1))});
    }
    return p;
  }
  if (type == "line") {
    const auto cpath = child(path, "coords");
    const auto& cs = as_array(field(j, path, "coords"), cpath);
    LineMetric l;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      l.coords.push_back(as_double(cs[i], child(cpath, i)));
    }
    return l;
  }
  schema_error(child(path, "type"), "unknown metric type \"" + type + "\"");
}

inline Json generator_metadata(const GeneratedInstance& g) {
  Json meta;
  meta["family"] = to_string(g.spec.family);
  meta["seed"] = g.spec.seed;
  meta["n_facilities"] = g.spec.n_facilities;
  meta["n_groups"] = g.spec.n_groups;
  if (g.spec.family == Family::GaussExp) {
    meta["mean_clients_per_group"] = g.spec.mean_clients_per_group;
  } else {
    meta["clients_per_group"] = g.spec.clients_per_group;
  }
  meta["k"] = g.spec.k;
  meta["square_side"] = 100.0;
  meta["clipped"] = false;
  meta["group_size_rounding"] = g.spec.family == Family::GaussExp ? "max(1, floor(x + 0.5))" : "none";
  meta["group_sizes"] = g.group_sizes;
  if (!g.groups.empty()) {
    Json groups = Json::array();
    for (const auto& d : g.groups) {
      Json gj;
      gj["mean"] = Json::array({d.mean[0], d.mean[1]});
      gj["v1"] = d.v1;
      gj["v2"] = d.v2;
      gj["theta"] = d.theta;
      gj["covariance"] = Json::array({Json::array({d.covariance[0], d.covariance[1]}),
                                      Json::array({d.covariance[1], d.covariance[2]})});
      gj["size"] = d.size;
      groups.push_back(std::move(gj));
    }
    meta["groups"] = std::move(groups);
  }
  return meta;
}

inline Json instance_to_json(const RkmInstance& inst, const Json& metadata = Json()) {
  auto j = io_detail::header("rkm_instance");
  j["metric"] = metric_to_json(inst.metric);
  j["facility_sites"] = inst.facility_sites;
  j["client_points"] = inst.client_points;
  j["groups"] = inst.groups;
  j["k"] = inst.k;
  if (!metadata.is_null()) {
    j["generator"] = metadata;
  }
  return j;
}

/// Structural parse: indices must be in range. Metric axioms are not checked
/// here (see validate_instance).
inline RkmInstance instance_from_json(const Json& j) {
  using namespace io_detail;
  check_header(j, "rkm_instance");
  RkmInstance inst;
  inst.metric = metric_from_json(field(j, "", "metric"), "metric");
  const int points = inst.metric.size();
  inst.facility_sites = int_list(field(j, "", "facility_sites"), "facility_sites");
  for (std::size_t i = 0; i < inst.facility_sites.size(); ++i) {
    check_index(inst.facility_sites[i], points, child("facility_sites", i), "point index");
  }
  inst.client_points = int_list(field(j, "", "client_points"), "client_points");
  for (std::size_t i = 0; i < inst.client_points.size(); ++i) {
    check_index(inst.client_points[i], points, child("client_points", i), "point index");
  }
  inst.groups = int_lists(field(j, "", "groups"), "groups");
  for (std::size_t g = 0; g < inst.groups.size(); ++g) {
    for (std::size_t i = 0; i < inst.groups[g].size(); ++i) {
      check_index(inst.groups[g][i], inst.n_clients(), child(child("groups", g), i), "client index");
    }
  }
  inst.k = as_int32(field(j, "", "k"), "k");
  return inst;
}

// ---- MCSP -----------------------------------------------------------------

inline Json provenance_to_json(const McspProvenance& p) {
  Json j;
  Json origin = Json::array();
  for (const auto& o : p.set_origin) {
    origin.push_back(Json::array({o.vertex, o.label}));
  }
  j["set_origin"] = std::move(origin);
  j["elements_per_edge"] = p.elements_per_edge;
  j["n_edges"] = p.n_edges;
  return j;
}

inline McspProvenance provenance_from_json(const Json& j, const std::string& path) {
  using namespace io_detail;
  McspProvenance p;
  const auto opath = child(path, "set_origin");
  const auto& origin = as_array(field(j, path, "set_origin"), opath);
  for (std::size_t i = 0; i < origin.size(); ++i) {
    const auto pair = int_list(origin[i], child(opath, i));
    if (pair.size() != 2) {
      schema_error(child(opath, i), "expected [vertex, label]");
    }
    p.set_origin.push_back({pair[0], pair[1]});
  }
  p.elements_per_edge = as_int32(field(j, path, "elements_per_edge"), child(path, "elements_per_edge"));
  p.n_edges = as_int32(field(j, path, "n_edges"), child(path, "n_edges"));
  return p;
}

inline Json mcsp_to_json(const McspInstance& inst, const McspProvenance* prov = nullptr) {
  auto j = io_detail::header("mcsp");
  j["m"] = inst.m;
  j["t"] = inst.t;
  j["sets"] = inst.sets;
  if (prov) {
    j["provenance"] = provenance_to_json(*prov);
  }
  return j;
}

inline McspInstance mcsp_from_json(const Json& j, McspProvenance* prov = nullptr) {
  using namespace io_detail;
  check_header(j, "mcsp");
  McspInstance inst;
  inst.m = as_int32(field(j, "", "m"), "m");
  inst.t = as_int32(field(j, "", "t"), "t");
  inst.sets = int_lists(field(j, "", "sets"), "sets");
  for (std::size_t s = 0; s < inst.sets.size(); ++s) {
    for (std::size_t i = 0; i < inst.sets[s].size(); ++i) {
      check_index(inst.sets[s][i], inst.m, child(child("sets", s), i), "element");
    }
  }
  if (prov) {
    const auto it = j.find("provenance");
    *prov = it == j.end() ? McspProvenance{} : provenance_from_json(*it, "provenance");
  }
  return inst;
}

// ---- Label Cover ----------------------------------------------------------

inline Json label_cover_to_json(const LabelCoverInstance& lc) {
  auto j = io_detail::header("label_cover");
  j["r"] = lc.r;
  j["parts"] = lc.parts;
  j["label_sizes"] = lc.label_sizes;
  j["n_colors"] = lc.n_colors;
  j["edges"] = lc.edges;
  j["projections"] = lc.projections;
  return j;
}

inline LabelCoverInstance label_cover_from_json(const Json& j) {
  using namespace io_detail;
  check_header(j, "label_cover");
  LabelCoverInstance lc;
  lc.r = as_int32(field(j, "", "r"), "r");
  lc.parts = int_lists(field(j, "", "parts"), "parts");
  lc.label_sizes = int_list(field(j, "", "label_sizes"), "label_sizes");
  lc.n_colors = as_int32(field(j, "", "n_colors"), "n_colors");
  lc.edges = int_lists(field(j, "", "edges"), "edges");
  const auto& pj = as_array(field(j, "", "projections"), "projections");
  for (std::size_t h = 0; h < pj.size(); ++h) {
    lc.projections.push_back(int_lists(pj[h], child("projections", h)));
  }
  if (auto v = validate_label_cover(lc); !v.empty()) {
    schema_error("", v.front());
  }
  return lc;
}

inline Json labeling_to_json(const Labeling& lab) {
  auto j = io_detail::header("labeling");
  j["sigma"] = lab.sigma;
  return j;
}

inline Labeling labeling_from_json(const Json& j) {
  io_detail::check_header(j, "labeling");
  return {io_detail::int_list(io_detail::field(j, "", "sigma"), "sigma")};
}

// ---- Partition systems ----------------------------------------------------

inline Json partition_system_to_json(const PartitionSystem& ps) {
  auto j = io_detail::header("partition_system");
  j["r"] = ps.r;
  j["n_colors"] = ps.n_colors;
  j["z_size"] = ps.z_size;
  Json rows = Json::array();
  for (int c = 0; c < ps.n_colors; ++c) {
    Json row = Json::array();
    for (int z = 0; z < ps.z_size; ++z) {
      row.push_back(ps.part(c, z));
    }
    rows.push_back(std::move(row));
  }
  j["assign"] = std::move(rows);
  return j;
}

inline PartitionSystem partition_system_from_json(const Json& j) {
  using namespace io_detail;
  check_header(j, "partition_system");
  PartitionSystem ps;
  ps.r = as_int32(field(j, "", "r"), "r");
  ps.n_colors = as_int32(field(j, "", "n_colors"), "n_colors");
  ps.z_size = as_int32(field(j, "", "z_size"), "z_size");
  const auto rows = int_lists(field(j, "", "assign"), "assign");
  if (static_cast<int>(rows.size()) != ps.n_colors) {
    schema_error("assign", "expected one row per color");
  }
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (static_cast<int>(rows[c].size()) != ps.z_size) {
      schema_error(child("assign", c), "expected z_size entries");
    }
    for (std::size_t z = 0; z < rows[c].size(); ++z) {
      check_index(rows[c][z], ps.r, child(child("assign", c), z), "part index");
      ps.assign.push_back(static_cast<std::uint8_t>(rows[c][z]));
    }
  }
  return ps;
}

// ---- Certificates ---------------------------------------------------------

/// A claimed congestion for a selection on an MCSP instance.
struct Certificate {
  std::string kind = "yes_instance";
  std::vector<int> witness_selection;
  int claimed_congestion = 1;
  std::optional<double> claimed_objective; // for the line-metric instance
  bool operator==(const Certificate&) const = default;
};

inline Json certificate_to_json(const Certificate& c) {
  auto j = io_detail::header("certificate");
  j["kind"] = c.kind;
  j["witness_selection"] = c.witness_selection;
  j["claimed_congestion"] = c.claimed_congestion;
  if (c.claimed_objective) {
    j["claimed_objective"] = *c.claimed_objective;
  }
  return j;
}

inline Certificate certificate_from_json(const Json& j) {
  using namespace io_detail;
  check_header(j, "certificate");
  Certificate c;
  const auto& kind = field(j, "", "kind");
  if (!kind.is_string()) {
    schema_error("kind", "expected a string");
  }
  c.kind = kind.get<std::string>();
  c.witness_selection = int_list(field(j, "", "witness_selection"), "witness_selection");
  c.claimed_congestion = as_int32(field(j, "", "claimed_congestion"), "claimed_congestion");
  if (const auto it = j.find("claimed_objective"); it != j.end()) {
    c.claimed_objective = as_double(*it, "claimed_objective");
  }
  return c;
}

// ---- LP solutions -----------------------------------------------------------

inline Json lp_solution_to_json(const LpModel& model, const LpSolution& sol) {
  auto j = io_detail::header("lp_solution");
  j["status"] = to_string(sol.status);
  j["objective"] = sol.objective;
  j["iterations"] = sol.iterations;
  Json vals = Json::object();
  for (std::size_t i = 0; i < sol.values.size() && i < model.vars.size(); ++i) {
    vals[model.vars[i].name] = sol.values[i];
  }
  j["values"] = std::move(vals);
  return j;
}

// ---- Files ----------------------------------------------------------------

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::Data, "cannot open " + path);
  }
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Data, path + ": malformed JSON: " + e.what());
  }
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Data, std::string("malformed JSON: ") + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fail(ErrorKind::Data, "cannot write " + path);
  }
  out << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

} // namespace rkm
