#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpgeo/riemann.hpp"

namespace cpgeo {

class PolarizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FloatOptions {
  int jet_order = 4;
  double tol = 1e-9;  // zero tests inside linear algebra
};

/// Moves an exact structure (and optionally phi and g) to sampled jets at the
/// patch's sample points.
struct FloatModel {
  std::shared_ptr<const JetSpace> space;
  ContactPairStructure<Float> st;
  std::optional<Metric<Float>> g;
};

inline std::shared_ptr<const JetSpace> jet_space_for(const FramedPatch<Exact>& P, const FloatOptions& opt = {}) {
  if (P.is_lie()) return std::make_shared<const JetSpace>(0, opt.jet_order, std::vector<std::vector<Q>>{{}}, opt.tol);
  return std::make_shared<const JetSpace>(P.num_vars(), opt.jet_order, P.sample_points(), opt.tol);
}

inline FloatModel to_float(const ContactPairStructure<Exact>& st, const std::optional<Metric<Exact>>& g, const FloatOptions& opt = {}) {
  auto sp = jet_space_for(st.patch, opt);
  auto f = [sp](const Exact& x) { return Float::from_exact(x, sp); };
  auto fv = [&](const Vec<Exact>& v) {
    Vec<Float> out;
    for (const auto& x : v) out.push_back(f(x));
    return out;
  };
  auto fvs = [&](const std::vector<Vec<Exact>>& vs) {
    std::vector<Vec<Float>> out;
    for (const auto& v : vs) out.push_back(fv(v));
    return out;
  };
  const auto samples = st.patch.is_lie() ? std::vector<std::vector<Q>>{{}} : st.patch.sample_points();
  ContactPairStructure<Float> fs{
      st.patch.convert<Float>(f, samples),
      ContactPair<Float>{st.pair.alpha1.convert<Float>(f), st.pair.alpha2.convert<Float>(f), st.pair.dalpha1.convert<Float>(f),
                         st.pair.dalpha2.convert<Float>(f), st.pair.h, st.pair.k, st.pair.volume, f(st.pair.volume_coefficient)},
      ReebFields<Float>{fv(st.reeb.Z1), fv(st.reeb.Z2), st.reeb.commute},
      Splittings<Float>{fvs(st.split.G1), fvs(st.split.G2), fvs(st.split.V), fvs(st.split.F1), fvs(st.split.F2)},
      std::nullopt};
  if (st.phi) fs.phi = st.phi->map(f);
  FloatModel m{sp, std::move(fs), std::nullopt};
  if (g) m.g = g->map(f);
  return m;
}

struct PolarizationOptions {
  double tol = 1e-12;
  int max_iterations = 100;
  std::optional<Metric<Exact>> seed_metric;  // identity when absent
  FloatOptions float_options;
};

namespace detail {

inline double max_coefficient(const Float& x) {
  if (!x.has_space()) return std::abs(x.constant_value());
  double m = 0;
  for (std::size_t p = 0; p < x.num_points(); ++p)
    for (std::size_t k = 0; k < x.space()->size(); ++k) m = std::max(m, std::abs(x.coeff(p, k)));
  return m;
}

inline double max_coefficient(const Matrix<Float>& M) {
  double m = 0;
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) m = std::max(m, max_coefficient(M(i, j)));
  return m;
}

/// Complex-structure part J of A = G^{-1} W by X <- (X - X^{-1}) / 2.
inline Matrix<Float> sign_iteration(Matrix<Float> X, const PolarizationOptions& opt, double lin_tol) {
  const Float half(0.5);
  for (int it = 0; it < opt.max_iterations; ++it) {
    const auto next = (X - inverse(X, lin_tol)).scaled(half);
    const double delta = max_coefficient(next - X);
    const double size = max_coefficient(next);
    X = next;
    if (delta <= opt.tol * (1.0 + size)) return X;
  }
  throw PolarizationError("polarization did not converge in " + std::to_string(opt.max_iterations) + " iterations");
}

}  // namespace detail

/// Builds (phi, g) from a contact pair by polarizing da_j against a seed
/// metric on each symplectic block TG_i; the vertical block is orthonormal
/// and g(Z_i, .) = a_i.
inline FloatModel build_associated_metric(const ContactPairStructure<Exact>& st, const PolarizationOptions& opt = {}) {
  const std::size_t n = st.dim();
  if (opt.seed_metric && (opt.seed_metric->rows() != n || opt.seed_metric->cols() != n))
    throw PolarizationError("seed metric must be n x n");
  auto model = to_float(st, std::nullopt, opt.float_options);
  auto& fs = model.st;
  const double lin_tol = opt.float_options.tol;
  const Metric<Float> seed = opt.seed_metric ? opt.seed_metric->map([&](const Exact& x) { return Float::from_exact(x, model.space); })
                                             : Metric<Float>::identity(n);

  struct Block {
    Matrix<Float> J, g;
  };
  auto polarize = [&](const std::vector<Vec<Float>>& F, const DiffForm<Float>& w, const char* label) -> Block {
    const std::size_t m = F.size();
    Matrix<Float> W(m, m), G(m, m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        W(a, b) = w(F[a], F[b]);
        G(a, b) = inner(seed, F[a], F[b]);
      }
    if (m == 0) return {W, G};
    for (std::size_t d = 1; d <= m; ++d) {
      Matrix<Float> minor(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) minor(i, j) = G(i, j);
      const Float det = determinant(minor, lin_tol);
      for (std::size_t p = 0; p < det.num_points(); ++p)
        if (det.value(p) <= lin_tol) throw PolarizationError(std::string("seed metric is not positive definite on ") + label);
    }
    const auto A = inverse(G, lin_tol) * W;
    const auto J = detail::sign_iteration(A, opt, lin_tol);
    const auto Pm = (A * J).scaled(Float(-1.0));
    auto gb = G * Pm;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) {
        const Float s = (gb(a, b) + gb(b, a)) * Float(0.5);
        gb(a, b) = s;
        gb(b, a) = s;
      }
    return {J, gb};
  };

  // TG1 carries da2, TG2 carries da1
  const auto b1 = polarize(fs.split.G1, fs.pair.dalpha2, "TG1");
  const auto b2 = polarize(fs.split.G2, fs.pair.dalpha1, "TG2");
  std::vector<Vec<Float>> cols = fs.split.G1;
  cols.insert(cols.end(), fs.split.G2.begin(), fs.split.G2.end());
  cols.push_back(fs.reeb.Z1);
  cols.push_back(fs.reeb.Z2);
  const auto B = Matrix<Float>::from_columns(cols, n);
  const auto Binv = inverse(B, lin_tol);
  Matrix<Float> phiB(n, n), gB(n, n);
  const std::size_t m1 = fs.split.G1.size(), m2 = fs.split.G2.size();
  for (std::size_t a = 0; a < m1; ++a)
    for (std::size_t b = 0; b < m1; ++b) {
      phiB(a, b) = b1.J(a, b);
      gB(a, b) = b1.g(a, b);
    }
  for (std::size_t a = 0; a < m2; ++a)
    for (std::size_t b = 0; b < m2; ++b) {
      phiB(m1 + a, m1 + b) = b2.J(a, b);
      gB(m1 + a, m1 + b) = b2.g(a, b);
    }
  gB(n - 2, n - 2) = Float(1.0);
  gB(n - 1, n - 1) = Float(1.0);
  fs.phi = B * phiB * Binv;
  model.g = Binv.transposed() * gB * Binv;
  return model;
}

}  // namespace cpgeo
