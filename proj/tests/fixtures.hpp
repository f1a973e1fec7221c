#pragma once
// Random polynomial data and a non-holonomic 4-dimensional chart shared by
// the property tests and the acceptance run.

#include <bit>
#include <random>

#include "cpgeo/cpgeo.hpp"

namespace fixtures {

using namespace cpgeo;

inline const std::vector<std::string>& xyzw() {
  static const std::vector<std::string> v = {"x", "y", "z", "w"};
  return v;
}

// e1 = d/dx, e2 = z d/dx + d/dy, e3 = x d/dy + d/dz, e4 = y*w d/dx + x^2 d/dz + d/dw
inline FramedPatch<Exact> chart4() {
  auto P = [](const char* s) { return parse_scalar(s, xyzw()); };
  Matrix<Exact> a = Matrix<Exact>::identity(4);
  a(1, 0) = P("z");
  a(2, 1) = P("x");
  a(3, 0) = P("y*w");
  a(3, 2) = P("x^2");
  return coordinate_patch(xyzw(), a, 3, 5);
}

inline Exact random_poly(std::mt19937& rng, int terms = 3, int maxdeg = 2, std::size_t nvars = 4) {
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, maxdeg);
  Exact r(0);
  for (int t = 0; t < terms; ++t) {
    Exact m(long(coef(rng)));
    for (std::size_t v = 0; v < nvars; ++v)
      for (int d = deg(rng); d > 0; --d) m = m * Exact::variable(v);
    r = r + m;
  }
  return r;
}

inline DiffForm<Exact> random_form(std::mt19937& rng, std::size_t n, std::size_t p) {
  DiffForm<Exact> w(n, p);
  for (std::uint32_t m = 0; m < (1u << n); ++m)
    if (std::size_t(std::popcount(m)) == p) w.set(m, random_poly(rng));
  return w;
}

inline Vec<Exact> random_vec(std::mt19937& rng, std::size_t n) {
  Vec<Exact> v(n);
  for (auto& x : v) x = random_poly(rng, 2, 1);
  return v;
}

inline std::vector<Manifest> lie_catalog() {
  return {nilpotent6(), nilpotent6_compatible(), heisenberg_vaisman(1), heisenberg_vaisman(2), flat_e2r(), flat_e2r2()};
}

/// 3-dimensional coordinate chart with a non-constant, non-diagonal metric.
struct MetricChart {
  FramedPatch<Exact> patch;
  Metric<Exact> g;
};

inline MetricChart metric_chart() {
  const std::vector<std::string> v = {"x", "y", "z"};
  Matrix<Exact> a = Matrix<Exact>::identity(3);
  a(1, 0) = parse_scalar("z", v);
  a(2, 1) = parse_scalar("x", v);
  Metric<Exact> g = Metric<Exact>::identity(3);
  g(0, 0) = parse_scalar("1 + x^2", v);
  g(1, 2) = g(2, 1) = parse_scalar("y/2", v);
  g(2, 2) = parse_scalar("2 + y^2", v);
  return {coordinate_patch(v, a), g};
}

/// Torsion, metric compatibility, curvature symmetries and first Bianchi on
/// all frame arguments; returns the number of violated identities.
inline std::size_t levi_civita_violations(const FramedPatch<Exact>& P, const Metric<Exact>& g) {
  const std::size_t n = P.dim();
  const Connection<Exact> C(P, g);
  const Curvature<Exact> R(C);
  auto e = [&](std::size_t i) { return unit_vec<Exact>(n, i); };
  std::size_t bad = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bad += !all_near_zero(C.nabla(e(i), e(j)) - C.nabla(e(j), e(i)) - P.bracket(e(i), e(j)), 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        bad += !(P.derive(i, g(j, k)) == inner(g, C.nabla(e(i), e(j)), e(k)) + inner(g, e(j), C.nabla(e(i), e(k))));
        bad += !all_near_zero(R.apply(e(i), e(j), e(k)) + R.apply(e(j), e(k), e(i)) + R.apply(e(k), e(i), e(j)), 0.0);
        const auto Rij_k = R.apply(e(i), e(j), e(k));
        const auto Rkl = [&](std::size_t l) { return R.apply(e(k), e(l), e(i)); };
        for (std::size_t l = 0; l < n; ++l) {
          const Exact Rijkl = inner(g, Rij_k, e(l));
          bad += !(Rijkl == -inner(g, R.apply(e(i), e(j), e(l)), e(k)));
          bad += !(Rijkl == inner(g, Rkl(l), e(j)));
        }
      }
    }
  return bad;
}

}  // namespace fixtures
