#pragma once

// JSON serialization for factors, elements, oracle tables, and reports.
//
// Conventions: a complex number is a two-element array [re, im]; a matrix is
// a row-major array of rows; an element is {"factor": ..., "data": ...} where
// data is a matrix for matrix factors, a flat coordinate list for spin
// factors, and a list of component elements for direct sums.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "triplekit/reconstruction.hpp"

namespace triplekit {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Complex numbers and matrices.

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw structure_error("json: expected a complex number as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw structure_error("json: expected a non-empty matrix");
  const auto rows = j.size();
  const auto cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw structure_error("json: ragged matrix rows");
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = complex_from_json(j[i][c]);
  }
  return m;
}

inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw structure_error("json: expected a coordinate list");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

// ---------------------------------------------------------------------------
// Factors.

inline json factor_to_json(const FactorDescriptor& f) {
  json j;
  switch (f.kind()) {
    case FactorKind::rect:
      j = {{"kind", "rect"}, {"m", f.rows()}, {"n", f.cols()}};
      break;
    case FactorKind::skew:
      j = {{"kind", "skew"}, {"n", f.rows()}};
      break;
    case FactorKind::herm:
      j = {{"kind", "herm"}, {"n", f.rows()}};
      break;
    case FactorKind::spin:
      j = {{"kind", "spin"}, {"dim", f.spin_dim()}};
      break;
    case FactorKind::sum: {
      json comps = json::array();
      for (const auto& c : f.components()) comps.push_back(factor_to_json(c));
      j = {{"kind", "sum"}, {"components", std::move(comps)}};
      break;
    }
  }
  return j;
}

inline FactorDescriptor factor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw structure_error("json: factor must be an object with a \"kind\" string");
  const std::string kind = j["kind"].get<std::string>();
  auto geti = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
      throw structure_error(std::string("json: factor field \"") + key + "\" missing or not an integer");
    return j[key].get<int>();
  };
  if (kind == "rect") return FactorDescriptor::rect(geti("m"), geti("n"));
  if (kind == "skew") return FactorDescriptor::skew(geti("n"));
  if (kind == "herm") return FactorDescriptor::herm(geti("n"));
  if (kind == "spin") return FactorDescriptor::spin(geti("dim"));
  if (kind == "sum") {
    if (!j.contains("components") || !j["components"].is_array())
      throw structure_error("json: sum factor needs a \"components\" array");
    std::vector<FactorDescriptor> comps;
    for (const auto& c : j["components"]) comps.push_back(factor_from_json(c));
    return FactorDescriptor::sum(std::move(comps));
  }
  throw structure_error("json: unknown factor kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------
// Elements.

inline json element_data_to_json(const Element& x) {
  switch (x.factor().kind()) {
    case FactorKind::spin:
      return vector_to_json(x.matrix().col(0));
    case FactorKind::sum: {
      json comps = json::array();
      for (const auto& p : x.parts()) comps.push_back(element_data_to_json(p));
      return comps;
    }
    default:
      return matrix_to_json(x.matrix());
  }
}

inline json element_to_json(const Element& x) {
  return {{"factor", factor_to_json(x.factor())}, {"data", element_data_to_json(x)}};
}

inline Element element_data_from_json(const FactorDescriptor& f, const json& data) {
  switch (f.kind()) {
    case FactorKind::spin: {
      Vector v = vector_from_json(data);
      if (v.size() != f.spin_dim())
        throw shape_error("json: spin element has " + std::to_string(v.size()) +
                          " coordinates, factor wants " + std::to_string(f.spin_dim()));
      return Element(f, v);
    }
    case FactorKind::sum: {
      const auto& comps = f.components();
      if (!data.is_array() || data.size() != comps.size())
        throw shape_error("json: sum element component count mismatch");
      std::vector<Element> parts;
      for (size_t i = 0; i < comps.size(); ++i) {
        const json& d = data[i];
        // Accept either bare data or a wrapped element for components.
        if (d.is_object() && d.contains("data"))
          parts.push_back(element_data_from_json(comps[i], d["data"]));
        else
          parts.push_back(element_data_from_json(comps[i], d));
      }
      return Element(f, std::move(parts));
    }
    default:
      return Element(f, matrix_from_json(data));
  }
}

inline Element element_from_json(const json& j) {
  if (!j.is_object() || !j.contains("factor") || !j.contains("data"))
    throw structure_error("json: element must be an object with \"factor\" and \"data\"");
  FactorDescriptor f = factor_from_json(j["factor"]);
  return element_data_from_json(f, j["data"]);
}

// ---------------------------------------------------------------------------
// Oracle tables: [{"in": element, "out": element}, ...].

inline json oracle_table_to_json(const std::vector<std::pair<Element, Element>>& entries) {
  json j = json::array();
  for (const auto& [in, out] : entries)
    j.push_back({{"in", element_to_json(in)}, {"out", element_to_json(out)}});
  return j;
}

inline std::vector<std::pair<Element, Element>> oracle_table_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw structure_error("json: oracle table must be a non-empty array");
  std::vector<std::pair<Element, Element>> entries;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("in") || !e.contains("out"))
      throw structure_error("json: oracle table entries need \"in\" and \"out\" elements");
    entries.emplace_back(element_from_json(e["in"]), element_from_json(e["out"]));
  }
  return entries;
}

// ---------------------------------------------------------------------------
// Linear maps.

inline json linear_map_to_json(const RealLinearMap& map) {
  json blocks = json::array();
  for (const auto& b : map.blocks)
    blocks.push_back({{"domain_index", b.domain_index},
                      {"target_index", b.target_index},
                      {"branch", to_string(b.branch)},
                      {"matrix", matrix_to_json(b.L)}});
  return {{"domain", factor_to_json(map.domain)},
          {"target", factor_to_json(map.target)},
          {"blocks", std::move(blocks)}};
}

inline Branch branch_from_json(const json& j) {
  const std::string s = j.get<std::string>();
  if (s == "linear") return Branch::linear;
  if (s == "antilinear") return Branch::antilinear;
  throw structure_error("json: unknown branch \"" + s + "\"");
}

inline RealLinearMap linear_map_from_json(const json& j) {
  RealLinearMap map;
  map.domain = factor_from_json(j.at("domain"));
  map.target = factor_from_json(j.at("target"));
  for (const auto& b : j.at("blocks"))
    map.blocks.push_back(RealLinearMap::Block{b.at("domain_index").get<int>(),
                                              b.at("target_index").get<int>(),
                                              branch_from_json(b.at("branch")),
                                              matrix_from_json(b.at("matrix"))});
  return map;
}

// ---------------------------------------------------------------------------
// Reports.

inline json classification_to_json(const Classification& c) {
  return {{"category", to_string(c.category)},
          {"rank", c.rank},
          {"dims", {c.dims[0], c.dims[1], c.dims[2]}},
          {"minimal", c.minimal},
          {"complete", c.complete},
          {"unitary", c.unitary}};
}

inline json grid_report_to_json(const GridReport& r) {
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"axiom", x.axiom}, {"indices", x.indices}, {"residual", x.residual}});
  return {{"ok", r.ok}, {"checks", r.checks}, {"violations", std::move(v)}};
}

inline json block_report_to_json(const BlockReport& b) {
  json j = {{"domain_index", b.domain_index},
            {"target_index", b.target_index},
            {"branch", to_string(b.branch)},
            {"lambda0", complex_to_json(b.lambda0)},
            {"max_residual", b.max_residual}};
  if (b.product_form != 0) j["form"] = b.product_form;
  return j;
}

inline json reconstruction_report_to_json(const ReconstructionReport& r,
                                          bool include_map = true) {
  json blocks = json::array();
  for (const auto& b : r.blocks) blocks.push_back(block_report_to_json(b));
  json j = {{"lambda0", complex_to_json(r.lambda0)},
            {"branch", to_string(r.branch)},
            {"max_residual", r.max_residual},
            {"n_samples", r.n_samples},
            {"sigma", r.sigma},
            {"blocks", std::move(blocks)}};
  if (include_map) j["map"] = linear_map_to_json(r.map);
  return j;
}

inline json extension_report_to_json(const ExtensionReport& r) {
  return {{"ok", r.ok},
          {"max_tripotent_residual", r.max_tripotent_residual},
          {"max_triple_residual", r.max_triple_residual},
          {"max_isometry_residual", r.max_isometry_residual},
          {"n_samples", r.n_samples}};
}

inline json preservation_report_to_json(const PreservationReport& r) {
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"kind", x.kind}, {"i", x.i}, {"j", x.j}, {"residual", x.residual}});
  return {{"ok", r.ok},
          {"pairs_checked", r.pairs_checked},
          {"sums_checked", r.sums_checked},
          {"violations", std::move(v)}};
}

// ---------------------------------------------------------------------------
// File helpers.

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw structure_error("json parse error in " + path + ": " + e.what());
  }
  return j;
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace triplekit
