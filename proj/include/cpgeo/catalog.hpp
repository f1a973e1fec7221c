#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpgeo/manifest.hpp"

namespace cpgeo {

/// A left-invariant contact (or 1-dimensional) Lie algebra with an
/// adapted phi and metric, used as a factor of product contact pairs.
struct ContactPiece {
  std::size_t dim = 0;
  std::vector<IndexedEntry> brackets;
  std::size_t alpha = 0;  // the contact form is w_{alpha+1}
  std::size_t h = 0;
  Endo<Exact> phi;
  Metric<Exact> g;
};

/// The real line: alpha = w1, no contact distribution.
inline ContactPiece line_piece() { return {1, {}, 0, 0, Endo<Exact>(1, 1), Metric<Exact>::identity(1)}; }

/// Heisenberg algebra [e_i, e_{n+i}] = 2 e_{2n+1}, alpha = w_{2n+1}, phi e_i = e_{n+i}.
inline ContactPiece heisenberg_piece(std::size_t n) {
  if (n < 1) throw std::invalid_argument("heisenberg needs n >= 1");
  const std::size_t d = 2 * n + 1;
  ContactPiece p{d, {}, d - 1, n, Endo<Exact>(d, d), Metric<Exact>::identity(d)};
  for (std::size_t i = 0; i < n; ++i) {
    p.brackets.emplace_back(i, n + i, d - 1, Exact(2));
    p.phi(n + i, i) = Exact(1);
    p.phi(i, n + i) = Exact(-1);
  }
  return p;
}

/// Universal cover of the Euclidean motion group: [e3, e1] = 2e2,
/// [e3, e2] = -2e1, alpha = w1, phi e2 = e3.
inline ContactPiece e2_piece() {
  ContactPiece p{3, {{2, 0, 1, Exact(2)}, {2, 1, 0, Exact(-2)}}, 0, 1, Endo<Exact>(3, 3), Metric<Exact>::identity(3)};
  p.phi(2, 1) = Exact(1);
  p.phi(1, 2) = Exact(-1);
  return p;
}

/// Direct product of two pieces: alpha1 from the first, alpha2 from the
/// second, phi and g block diagonal.
inline Manifest product_contact(const std::string& name, const ContactPiece& a, const ContactPiece& b) {
  Manifest m;
  m.name = name;
  m.dimension = a.dim + b.dim;
  m.h = a.h;
  m.k = b.h;
  m.backend = "exact";
  m.frame_kind = FrameKind::structure_constants;
  m.entries = a.brackets;
  for (const auto& [i, j, k, v] : b.brackets) m.entries.emplace_back(i + a.dim, j + a.dim, k + a.dim, v);
  const std::size_t n = m.dimension;
  m.alpha1 = zero_vec<Exact>(n);
  m.alpha2 = zero_vec<Exact>(n);
  m.alpha1[a.alpha] = Exact(1);
  m.alpha2[a.dim + b.alpha] = Exact(1);
  Endo<Exact> phi(n, n);
  Metric<Exact> g(n, n);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) {
      phi(i, j) = a.phi(i, j);
      g(i, j) = a.g(i, j);
    }
  for (std::size_t i = 0; i < b.dim; ++i)
    for (std::size_t j = 0; j < b.dim; ++j) {
      phi(a.dim + i, a.dim + j) = b.phi(i, j);
      g(a.dim + i, a.dim + j) = b.g(i, j);
    }
  m.phi = phi;
  m.metric = g;
  return m;
}

/// The 6-dimensional nilpotent group with dw1 = w3^w4, dw2 = w5^w6,
/// dw4 = w3^w5, dw5 = w3^w6 and the pair (w1, w2) of type (1, 1).
inline Manifest nilpotent6() {
  Manifest m;
  m.name = "nilpotent6";
  m.description = "6-dimensional nilpotent Lie group, non-normal metric contact pair of type (1, 1)";
  m.dimension = 6;
  m.h = m.k = 1;
  m.backend = "exact";
  m.frame_kind = FrameKind::coframe_differentials;
  m.entries = {{0, 2, 3, Exact(1)}, {1, 4, 5, Exact(1)}, {3, 2, 4, Exact(1)}, {4, 2, 5, Exact(1)}};
  m.alpha1 = unit_vec<Exact>(6, 0);
  m.alpha2 = unit_vec<Exact>(6, 1);
  Endo<Exact> phi(6, 6);
  phi(3, 2) = Exact(-1);
  phi(2, 3) = Exact(1);
  phi(5, 4) = Exact(-1);
  phi(4, 5) = Exact(1);
  m.phi = phi;
  Metric<Exact> g = Metric<Exact>::identity(6);
  for (std::size_t i = 2; i < 6; ++i) g(i, i) = Exact(Q(1, 2));
  m.metric = g;
  return m;
}

/// nilpotent6 with the horizontal block of g rescaled on e3, e4: still
/// compatible with phi but no longer associated.
inline Manifest nilpotent6_compatible() {
  Manifest m = nilpotent6();
  m.name = "nilpotent6_compatible";
  m.description = "nilpotent6 with g(e3,e3) = g(e4,e4) = 1: compatible, not associated";
  (*m.metric)(2, 2) = Exact(1);
  (*m.metric)(3, 3) = Exact(1);
  return m;
}

/// Heisenberg(n) x R: a normal metric contact pair of type (n, 0).
inline Manifest heisenberg_vaisman(std::size_t n = 1) {
  auto m = product_contact("heisenberg_vaisman", heisenberg_piece(n), line_piece());
  if (n != 1) m.name += "_" + std::to_string(n);
  m.description = "Heisenberg group H(" + std::to_string(n) + ") x R, normal metric contact pair of type (" + std::to_string(n) + ", 0)";
  return m;
}

/// Flat universal cover of E(2) times R, type (1, 0).
inline Manifest flat_e2r() {
  auto m = product_contact("flat_e2r", e2_piece(), line_piece());
  m.description = "universal cover of E(2) x R with its flat left-invariant associated metric, type (1, 0)";
  return m;
}

/// Product of two flat E(2) covers, type (1, 1).
inline Manifest flat_e2r2() {
  auto m = product_contact("flat_e2r2", e2_piece(), e2_piece());
  m.description = "product of two universal covers of E(2) with flat associated metric, type (1, 1)";
  return m;
}

/// Darboux chart: a1 = dz - sum y_i dx_i, a2 = dt - sum v_j du_j on
/// coordinates x, y, z, u, v, t, with no metric supplied.
inline Manifest darboux(std::size_t h, std::size_t k) {
  Manifest m;
  m.name = "darboux_" + std::to_string(h) + "_" + std::to_string(k);
  m.description = "Darboux model of type (" + std::to_string(h) + ", " + std::to_string(k) + "); no metric, polarized on the float backend";
  m.dimension = 2 * h + 2 * k + 2;
  m.h = h;
  m.k = k;
  m.backend = "float";
  m.frame_kind = FrameKind::coordinate_frame;
  auto idx = [](const char* base, std::size_t i, std::size_t count) { return count == 1 ? std::string(base) : base + std::to_string(i + 1); };
  for (std::size_t i = 0; i < h; ++i) m.coordinates.push_back(idx("x", i, h));
  for (std::size_t i = 0; i < h; ++i) m.coordinates.push_back(idx("y", i, h));
  m.coordinates.push_back("z");
  for (std::size_t j = 0; j < k; ++j) m.coordinates.push_back(idx("u", j, k));
  for (std::size_t j = 0; j < k; ++j) m.coordinates.push_back(idx("v", j, k));
  m.coordinates.push_back("t");
  const std::size_t n = m.dimension;
  m.frame = Matrix<Exact>::identity(n);
  m.alpha1 = zero_vec<Exact>(n);
  m.alpha2 = zero_vec<Exact>(n);
  for (std::size_t i = 0; i < h; ++i) m.alpha1[i] = -Exact::variable(h + i);
  m.alpha1[2 * h] = Exact(1);
  const std::size_t o = 2 * h + 1;
  for (std::size_t j = 0; j < k; ++j) m.alpha2[o + j] = -Exact::variable(o + k + j);
  m.alpha2[n - 1] = Exact(1);
  return m;
}

struct CatalogInfo {
  std::string name;
  std::string parameters;  // empty when none
  std::string summary;
};

inline std::vector<CatalogInfo> list_examples() {
  return {
      {"darboux", "h, k", "Darboux chart of type (h, k); metric from polarization"},
      {"flat_e2r", "", "E(2) cover x R, flat, type (1, 0); not normal, Z not Killing"},
      {"flat_e2r2", "", "E(2) cover x E(2) cover, flat, type (1, 1)"},
      {"heisenberg_vaisman", "n", "Heisenberg(n) x R, normal, type (n, 0); Ric(Z) = n"},
      {"nilpotent6", "", "nilpotent Lie group, type (1, 1); Z Killing, Ric(Z) = 2, not normal"},
      {"nilpotent6_compatible", "", "nilpotent6 with a compatible but non-associated metric"},
  };
}

/// Builds a catalog manifest; `params` holds the integer parameters.
inline Manifest build_example(const std::string& name, const std::map<std::string, long>& params = {}) {
  auto param = [&](const std::string& key, long fallback) {
    auto it = params.find(key);
    const long v = it == params.end() ? fallback : it->second;
    if (v < 0) throw std::invalid_argument("parameter " + key + " must be non-negative");
    return std::size_t(v);
  };
  auto no_params = [&] {
    if (!params.empty()) throw std::invalid_argument(name + " takes no parameters");
  };
  if (name == "nilpotent6") return no_params(), nilpotent6();
  if (name == "nilpotent6_compatible") return no_params(), nilpotent6_compatible();
  if (name == "flat_e2r") return no_params(), flat_e2r();
  if (name == "flat_e2r2") return no_params(), flat_e2r2();
  auto only = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, v] : params)
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
        throw std::invalid_argument(name + " has no parameter '" + key + "'");
  };
  if (name == "heisenberg_vaisman") return only({"n"}), heisenberg_vaisman(param("n", 1));
  if (name == "darboux") return only({"h", "k"}), darboux(param("h", 1), param("k", 0));
  throw std::invalid_argument("unknown catalog example '" + name + "'");
}

}  // namespace cpgeo
