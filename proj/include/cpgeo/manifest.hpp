#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "cpgeo/polarization.hpp"

namespace cpgeo {

/// Raised for malformed manifests; `line` is 1-based, 0 when unknown.
class ManifestError : public std::runtime_error {
 public:
  ManifestError(const std::string& msg, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class FrameKind { structure_constants, coframe_differentials, coordinate_frame };

/// An entry (i, j, k, value), 0-based. For structure constants: [e_i, e_j]
/// has e_k component value. For coframe differentials: dw_i contains
/// value * w_j ^ w_k.
using IndexedEntry = std::tuple<std::size_t, std::size_t, std::size_t, Exact>;

/// A manifold with a contact pair, as read from or written to a manifest.
struct Manifest {
  std::string name;
  std::size_t dimension = 0;
  std::vector<std::string> coordinates;
  std::string backend = "auto";  // auto | exact | float
  std::size_t h = 0, k = 0;
  FrameKind frame_kind = FrameKind::structure_constants;
  std::vector<IndexedEntry> entries;
  std::optional<Matrix<Exact>> frame;  // coordinate frames: row i is e_i
  Vec<Exact> alpha1, alpha2;           // components on the coframe
  std::optional<Endo<Exact>> phi;
  std::optional<Metric<Exact>> metric;
  std::vector<std::vector<Q>> sample_points;
  std::size_t extra_samples = 20;
  std::uint64_t seed = 1;
  std::string description;
};

/// Structure constants from coframe differentials: dw_k = sum s w_i ^ w_j
/// means c^k_{ij} = -(s_ij - s_ji).
inline std::vector<IndexedEntry> brackets_from_differentials(const std::vector<IndexedEntry>& diffs) {
  std::vector<IndexedEntry> out;
  for (const auto& [k, i, j, s] : diffs) {
    if (i == j) continue;
    out.emplace_back(i, j, k, -s);
  }
  return out;
}

inline FramedPatch<Exact> build_patch(const Manifest& m) {
  switch (m.frame_kind) {
    case FrameKind::structure_constants: return FramedPatch<Exact>::lie_from_brackets(m.dimension, m.entries);
    case FrameKind::coframe_differentials: return FramedPatch<Exact>::lie_from_brackets(m.dimension, brackets_from_differentials(m.entries));
    case FrameKind::coordinate_frame:
      if (!m.frame) throw ManifestError("coordinate frame missing");
      return coordinate_patch(m.coordinates, *m.frame, m.extra_samples, m.seed, m.sample_points);
  }
  throw ManifestError("unknown frame kind");
}

inline ContactPairStructure<Exact> build_structure(const Manifest& m, double tol = 1e-9) {
  auto P = build_patch(m);
  auto a1 = DiffForm<Exact>::one_form(m.alpha1);
  auto a2 = DiffForm<Exact>::one_form(m.alpha2);
  return build_structure(std::move(P), a1, a2, m.h, m.k, m.phi, tol);
}

namespace detail {

inline std::size_t line_of(const toml::node& n) { return n.source().begin.line; }

inline Exact scalar_node(const toml::node& n, const std::vector<std::string>& vars) {
  std::string text;
  if (auto s = n.as_string()) text = s->get();
  else if (auto i = n.as_integer()) text = std::to_string(i->get());
  else throw ManifestError("expected a scalar string", line_of(n));
  try {
    return parse_scalar(text, vars);
  } catch (const ScalarSyntaxError& e) {
    throw ManifestError(std::string("bad scalar '") + text + "': " + e.what(), line_of(n));
  }
}

inline const toml::array& array_node(const toml::node& n, const std::string& what) {
  auto a = n.as_array();
  if (!a) throw ManifestError(what + " must be an array", line_of(n));
  return *a;
}

inline std::size_t index_node(const toml::node& n, std::size_t dim, const std::string& what) {
  auto i = n.as_integer();
  if (!i) throw ManifestError(what + " must be an integer index", line_of(n));
  const auto v = i->get();
  if (v < 1 || std::size_t(v) > dim) throw ManifestError(what + " index " + std::to_string(v) + " out of range 1.." + std::to_string(dim), line_of(n));
  return std::size_t(v - 1);
}

inline Vec<Exact> vector_node(const toml::node& n, std::size_t dim, const std::vector<std::string>& vars, const std::string& what) {
  const auto& a = array_node(n, what);
  if (a.size() != dim) throw ManifestError(what + " must have " + std::to_string(dim) + " entries", line_of(n));
  Vec<Exact> v;
  for (const auto& x : a) v.push_back(scalar_node(x, vars));
  return v;
}

inline Matrix<Exact> matrix_node(const toml::node& n, std::size_t dim, const std::vector<std::string>& vars, const std::string& what) {
  const auto& rows = array_node(n, what);
  if (rows.size() != dim) throw ManifestError(what + " must have " + std::to_string(dim) + " rows", line_of(n));
  Matrix<Exact> M(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto r = vector_node(rows[i], dim, vars, what + " row " + std::to_string(i + 1));
    for (std::size_t j = 0; j < dim; ++j) M(i, j) = r[j];
  }
  return M;
}

inline std::vector<IndexedEntry> entries_node(const toml::node& n, std::size_t dim, const std::string& what) {
  std::vector<IndexedEntry> out;
  for (const auto& e : array_node(n, what)) {
    const auto& t = array_node(e, what + " entry");
    if (t.size() != 4) throw ManifestError(what + " entries are [i, j, k, value]", line_of(e));
    out.emplace_back(index_node(t[0], dim, what), index_node(t[1], dim, what), index_node(t[2], dim, what), scalar_node(t[3], {}));
  }
  return out;
}

}  // namespace detail

inline Manifest parse_manifest(std::string_view text, const std::string& source = "manifest") {
  toml::table tbl;
  try {
    tbl = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw ManifestError(std::string(e.description()), e.source().begin.line);
  }
  using namespace detail;
  Manifest m;
  auto require = [&](const char* key) -> const toml::node& {
    auto n = tbl.get(key);
    if (!n) throw ManifestError(std::string("missing key '") + key + "'");
    return *n;
  };
  for (const auto& [key, node] : tbl) {
    static const std::vector<std::string> known = {"name", "description", "dimension", "coordinates", "backend", "type", "frame",
                                                   "alpha1", "alpha2", "phi", "metric", "sample_points", "samples", "seed"};
    if (std::find(known.begin(), known.end(), std::string(key.str())) == known.end())
      throw ManifestError("unknown key '" + std::string(key.str()) + "'", line_of(node));
  }
  if (auto n = tbl["name"].as_string()) m.name = n->get();
  else throw ManifestError("missing string key 'name'");
  if (auto d = tbl["description"].as_string()) m.description = d->get();
  {
    const auto& d = require("dimension");
    auto v = d.as_integer();
    if (!v || v->get() < 2) throw ManifestError("dimension must be an integer >= 2", line_of(d));
    m.dimension = std::size_t(v->get());
  }
  const std::size_t n = m.dimension;
  if (auto c = tbl.get("coordinates")) {
    for (const auto& x : array_node(*c, "coordinates")) {
      auto s = x.as_string();
      if (!s) throw ManifestError("coordinate names must be strings", line_of(x));
      m.coordinates.push_back(s->get());
    }
    if (m.coordinates.size() != n) throw ManifestError("need one coordinate per dimension", line_of(*c));
  }
  if (auto b = tbl.get("backend")) {
    auto s = b->as_string();
    if (!s || (s->get() != "auto" && s->get() != "exact" && s->get() != "float"))
      throw ManifestError("backend must be \"auto\", \"exact\" or \"float\"", line_of(*b));
    m.backend = s->get();
  }
  {
    const auto& t = array_node(require("type"), "type");
    if (t.size() != 2 || !t[0].as_integer() || !t[1].as_integer()) throw ManifestError("type must be [h, k]", line_of(require("type")));
    const auto h = t[0].as_integer()->get(), k = t[1].as_integer()->get();
    if (h < 0 || k < 0) throw ManifestError("type entries must be non-negative", line_of(require("type")));
    m.h = std::size_t(h);
    m.k = std::size_t(k);
  }
  {
    const auto& fnode = require("frame");
    auto f = fnode.as_table();
    if (!f) throw ManifestError("[frame] must be a table", line_of(fnode));
    const int kinds = int(f->contains("structure_constants")) + int(f->contains("coframe_differentials")) + int(f->contains("coordinate_frame"));
    if (kinds != 1)
      throw ManifestError("[frame] needs exactly one of structure_constants, coframe_differentials, coordinate_frame", line_of(fnode));
    if (auto s = f->get("structure_constants")) {
      m.frame_kind = FrameKind::structure_constants;
      m.entries = entries_node(*s, n, "structure_constants");
    } else if (auto s = f->get("coframe_differentials")) {
      m.frame_kind = FrameKind::coframe_differentials;
      m.entries = entries_node(*s, n, "coframe_differentials");
    } else {
      m.frame_kind = FrameKind::coordinate_frame;
      if (m.coordinates.empty()) throw ManifestError("a coordinate frame needs 'coordinates'", line_of(fnode));
      m.frame = matrix_node(*f->get("coordinate_frame"), n, m.coordinates, "coordinate_frame");
    }
    for (const auto& [key, node] : *f)
      if (key != "structure_constants" && key != "coframe_differentials" && key != "coordinate_frame")
        throw ManifestError("unknown key 'frame." + std::string(key.str()) + "'", line_of(node));
  }
  if (m.frame_kind != FrameKind::coordinate_frame && !m.coordinates.empty())
    throw ManifestError("'coordinates' only applies to coordinate frames", line_of(*tbl.get("coordinates")));
  const auto& vars = m.coordinates;
  m.alpha1 = vector_node(require("alpha1"), n, vars, "alpha1");
  m.alpha2 = vector_node(require("alpha2"), n, vars, "alpha2");
  if (auto p = tbl.get("phi")) m.phi = matrix_node(*p, n, vars, "phi");
  if (auto g = tbl.get("metric")) m.metric = matrix_node(*g, n, vars, "metric");
  if (auto s = tbl.get("sample_points")) {
    for (const auto& p : array_node(*s, "sample_points")) {
      std::vector<Q> pt;
      for (const auto& x : array_node(p, "sample point")) {
        const Exact v = scalar_node(x, {});
        if (!v.is_constant()) throw ManifestError("sample coordinates must be rational numbers", line_of(x));
        pt.push_back(v.constant_value());
      }
      if (pt.size() != n) throw ManifestError("sample point needs " + std::to_string(n) + " coordinates", line_of(p));
      m.sample_points.push_back(std::move(pt));
    }
  }
  if (auto s = tbl.get("samples")) {
    auto v = s->as_integer();
    if (!v || v->get() < 0) throw ManifestError("samples must be a non-negative integer", line_of(*s));
    m.extra_samples = std::size_t(v->get());
  }
  if (auto s = tbl.get("seed")) {
    auto v = s->as_integer();
    if (!v || v->get() < 0) throw ManifestError("seed must be a non-negative integer", line_of(*s));
    m.seed = std::uint64_t(v->get());
  }
  return m;
}

namespace detail {

inline std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string vector_text(const Vec<Exact>& v, const std::vector<std::string>& vars) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + quoted(to_string(v[i], vars));
  return out + "]";
}

inline std::string matrix_text(const Matrix<Exact>& M, const std::vector<std::string>& vars) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < M.rows(); ++i) out += "  " + vector_text(M.row(i), vars) + ",\n";
  return out + "]";
}

}  // namespace detail

/// TOML text for a manifest, keys in a fixed reading order.
inline std::string emit_manifest(const Manifest& m) {
  using namespace detail;
  std::ostringstream o;
  o << "name = " << quoted(m.name) << '\n';
  if (!m.description.empty()) o << "description = " << quoted(m.description) << '\n';
  o << "dimension = " << m.dimension << '\n';
  o << "type = [" << m.h << ", " << m.k << "]\n";
  o << "backend = " << quoted(m.backend) << '\n';
  if (!m.coordinates.empty()) {
    o << "coordinates = [";
    for (std::size_t i = 0; i < m.coordinates.size(); ++i) o << (i ? ", " : "") << quoted(m.coordinates[i]);
    o << "]\n";
  }
  if (m.frame_kind == FrameKind::coordinate_frame && m.sample_points.empty()) o << "samples = " << m.extra_samples << "\nseed = " << m.seed << '\n';
  o << "alpha1 = " << vector_text(m.alpha1, m.coordinates) << '\n';
  o << "alpha2 = " << vector_text(m.alpha2, m.coordinates) << '\n';
  if (m.phi) o << "phi = " << matrix_text(*m.phi, m.coordinates) << '\n';
  if (m.metric) o << "metric = " << matrix_text(*m.metric, m.coordinates) << '\n';
  if (!m.sample_points.empty()) {
    o << "sample_points = [\n";
    for (const auto& p : m.sample_points) {
      o << "  [";
      for (std::size_t i = 0; i < p.size(); ++i) o << (i ? ", " : "") << quoted(to_string(p[i]));
      o << "],\n";
    }
    o << "]\n";
  }
  o << "\n[frame]\n";
  if (m.frame_kind == FrameKind::coordinate_frame) {
    o << "coordinate_frame = " << matrix_text(*m.frame, m.coordinates) << '\n';
  } else {
    o << (m.frame_kind == FrameKind::structure_constants ? "structure_constants" : "coframe_differentials") << " = [\n";
    for (const auto& [i, j, k, v] : m.entries) o << "  [" << i + 1 << ", " << j + 1 << ", " << k + 1 << ", " << quoted(to_string(v)) << "],\n";
    o << "]\n";
  }
  return o.str();
}

}  // namespace cpgeo
