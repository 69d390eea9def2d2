#pragma once

// JSON formats for specs, elements and map descriptors.
//
//   spec        {"blocks":[n1,...]}
//   matrix      [[[re,im],...],...]            row-major
//   element     {"spec":{...},"parts":[matrix,...]}
//   descriptor  {"kind":"unitary"|"transpose","perm":[1-based],"unitaries":[matrix,...]}
//               {"kind":"power","exponents":[...]}
//               {"kind":"direct_sum","parts":[{"source_blocks":[..],"target_blocks":[..],"map":{...}},...]}
//               {"kind":"compose","outer":{...},"inner":{...}}
//
// Doubles are written in shortest round-trip form, so parse(dump(x)) == x
// bit for bit.

#include <fstream>
#include <json.hpp>
#include <string>
#include <utility>

#include "seqiso/morphisms.hpp"

namespace seqiso {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaError, path + ": " + what);
}

inline const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(path + "." + key, "missing field");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

inline std::vector<std::size_t> index_list(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of 1-based indices");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() < 1)
      schema_error(path + "[" + std::to_string(i) + "]", "expected a positive integer");
    out.push_back(static_cast<std::size_t>(j[i].get<long long>() - 1));
  }
  return out;
}

inline Json index_list_json(const std::vector<std::size_t>& v) {
  Json out = Json::array();
  for (std::size_t i : v) out.push_back(i + 1);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline Json to_json(const AlgebraSpec& spec) { return Json{{"blocks", spec.blocks()}}; }

inline AlgebraSpec spec_from_json(const Json& j, const std::string& path = "spec") {
  const Json& blocks = detail::field(j, "blocks", path);
  if (!blocks.is_array() || blocks.empty()) detail::schema_error(path + ".blocks", "expected a nonempty array");
  std::vector<int> sizes;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (!blocks[i].is_number_integer() || blocks[i].get<long long>() < 1)
      detail::schema_error(path + ".blocks[" + std::to_string(i) + "]", "expected a positive integer");
    sizes.push_back(blocks[i].get<int>());
  }
  return AlgebraSpec(std::move(sizes));
}

inline Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) detail::schema_error(path, "expected a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    const std::string rpath = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      detail::schema_error(rpath, "expected a row of " + std::to_string(n) + " entries");
    for (Eigen::Index k = 0; k < n; ++k) {
      const Json& e = row[static_cast<std::size_t>(k)];
      const std::string epath = rpath + "[" + std::to_string(k) + "]";
      if (!e.is_array() || e.size() != 2) detail::schema_error(epath, "expected [re, im]");
      m(i, k) = Complex(detail::number(e[0], epath + "[0]"), detail::number(e[1], epath + "[1]"));
    }
  }
  return m;
}

inline Json to_json(const AlgebraElement& x) {
  Json parts = Json::array();
  for (const auto& p : x.parts()) parts.push_back(to_json(p));
  return Json{{"spec", to_json(x.spec())}, {"parts", std::move(parts)}};
}

inline AlgebraElement element_from_json(const Json& j, const std::string& path = "element") {
  AlgebraSpec spec = spec_from_json(detail::field(j, "spec", path), path + ".spec");
  const Json& parts = detail::field(j, "parts", path);
  if (!parts.is_array() || parts.size() != spec.block_count())
    detail::schema_error(path + ".parts", "expected one matrix per block");
  std::vector<ComplexMatrix> ms;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    ms.push_back(matrix_from_json(parts[i], path + ".parts[" + std::to_string(i) + "]"));
    if (ms.back().rows() != spec.block_size(i))
      detail::schema_error(path + ".parts[" + std::to_string(i) + "]", "size does not match spec");
  }
  return {std::move(spec), std::move(ms)};
}

// ---------------------------------------------------------------------------

inline Json to_json(const MapDescriptor& d) {
  return std::visit(
      [](const auto& node) -> Json {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, UnitaryConjugation> || std::is_same_v<T, TransposeConjugation>) {
          Json us = Json::array();
          for (const auto& u : node.unitaries) us.push_back(to_json(u));
          const auto perm = node.perm.empty() ? identity_perm(node.unitaries.size()) : node.perm;
          return Json{{"kind", std::is_same_v<T, UnitaryConjugation> ? "unitary" : "transpose"},
                      {"perm", detail::index_list_json(perm)},
                      {"unitaries", std::move(us)}};
        } else if constexpr (std::is_same_v<T, PowerMap>) {
          return Json{{"kind", "power"}, {"exponents", node.exponents}};
        } else if constexpr (std::is_same_v<T, DirectSum>) {
          Json parts = Json::array();
          for (const auto& p : node.parts)
            parts.push_back(Json{{"source_blocks", detail::index_list_json(p.source_blocks)},
                                 {"target_blocks", detail::index_list_json(p.target_blocks)},
                                 {"map", to_json(*p.map)}});
          return Json{{"kind", "direct_sum"}, {"parts", std::move(parts)}};
        } else {
          return Json{{"kind", "compose"}, {"outer", to_json(*node.outer)}, {"inner", to_json(*node.inner)}};
        }
      },
      d.node);
}

/// Structural parse only; invariants are checked by infer_shape.
inline MapDescriptor descriptor_from_json(const Json& j, const std::string& path = "map") {
  const Json& kind_j = detail::field(j, "kind", path);
  if (!kind_j.is_string()) detail::schema_error(path + ".kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();

  if (kind == "unitary" || kind == "transpose") {
    const Json& us = detail::field(j, "unitaries", path);
    if (!us.is_array() || us.empty()) detail::schema_error(path + ".unitaries", "expected a nonempty array");
    std::vector<ComplexMatrix> unitaries;
    for (std::size_t i = 0; i < us.size(); ++i)
      unitaries.push_back(matrix_from_json(us[i], path + ".unitaries[" + std::to_string(i) + "]"));
    std::vector<std::size_t> perm =
        j.contains("perm") ? detail::index_list(j["perm"], path + ".perm") : identity_perm(unitaries.size());
    if (kind == "unitary") return {UnitaryConjugation{std::move(perm), std::move(unitaries)}};
    return {TransposeConjugation{std::move(perm), std::move(unitaries)}};
  }
  if (kind == "power") {
    const Json& ex = detail::field(j, "exponents", path);
    if (!ex.is_array() || ex.empty()) detail::schema_error(path + ".exponents", "expected a nonempty array");
    std::vector<double> exponents;
    for (std::size_t i = 0; i < ex.size(); ++i)
      exponents.push_back(detail::number(ex[i], path + ".exponents[" + std::to_string(i) + "]"));
    return {PowerMap{std::move(exponents)}};
  }
  if (kind == "direct_sum") {
    const Json& parts = detail::field(j, "parts", path);
    if (!parts.is_array() || parts.empty()) detail::schema_error(path + ".parts", "expected a nonempty array");
    DirectSum ds;
    std::size_t next_source = 0, next_target = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const std::string ppath = path + ".parts[" + std::to_string(i) + "]";
      auto sub = std::make_shared<const MapDescriptor>(
          descriptor_from_json(detail::field(parts[i], "map", ppath), ppath + ".map"));
      DirectSumPart part{{}, {}, sub};
      if (parts[i].contains("source_blocks")) {
        part.source_blocks = detail::index_list(parts[i]["source_blocks"], ppath + ".source_blocks");
        part.target_blocks = detail::index_list(detail::field(parts[i], "target_blocks", ppath),
                                                ppath + ".target_blocks");
      } else {
        // consecutive layout
        const MapShape shape = infer_shape(*sub, std::numeric_limits<double>::infinity());
        for (std::size_t b = 0; b < shape.source.block_count(); ++b) part.source_blocks.push_back(next_source++);
        for (std::size_t b = 0; b < shape.target.block_count(); ++b) part.target_blocks.push_back(next_target++);
      }
      ds.parts.push_back(std::move(part));
    }
    return {std::move(ds)};
  }
  if (kind == "compose") {
    auto outer = std::make_shared<const MapDescriptor>(descriptor_from_json(detail::field(j, "outer", path), path + ".outer"));
    auto inner = std::make_shared<const MapDescriptor>(descriptor_from_json(detail::field(j, "inner", path), path + ".inner"));
    return {Composition{outer, inner}};
  }
  detail::schema_error(path + ".kind", "unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// files

/// Reads a JSON file; syntax errors come back as SchemaError with the
/// parser's line/column.
inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::SchemaError, path + ": cannot open for writing");
  out << j.dump(2) << '\n';
}

inline constexpr double kFileUnitarityTol = 1e-8;

/// Spec file: {"blocks":[...]} or any object with a "spec" field.
inline AlgebraSpec parse_spec_file(const std::string& path) {
  const Json j = read_json_file(path);
  if (j.is_object() && j.contains("spec")) return spec_from_json(j["spec"], path + ":spec");
  return spec_from_json(j, path);
}

/// Map file: a bare descriptor, or {"spec":{...},"map":{...}}. Descriptor
/// invariants are validated here; the spec defaults to the descriptor's
/// source algebra.
inline std::pair<AlgebraSpec, MapDescriptor> parse_descriptor_file(const std::string& path) {
  const Json j = read_json_file(path);
  const bool wrapped = j.is_object() && j.contains("map");
  MapDescriptor d = descriptor_from_json(wrapped ? j["map"] : j, path + ":map");
  MapShape shape{AlgebraSpec{}, AlgebraSpec{}};
  try {
    shape = infer_shape(d, kFileUnitarityTol);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvariantError, path + ": " + e.what());
  }
  if (wrapped && j.contains("spec")) {
    AlgebraSpec spec = spec_from_json(j["spec"], path + ":spec");
    if (!(spec == shape.source))
      throw Error(ErrorCode::InvariantError, path + ": descriptor acts on " + to_string(shape.source) +
                                                 " but the file declares spec " + to_string(spec));
    return {std::move(spec), std::move(d)};
  }
  return {shape.source, std::move(d)};
}

}  // namespace seqiso
