#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cpgeo/structure.hpp"

namespace cpgeo {

class InvalidMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// g(e_i, e_j) as a symmetric matrix.
template <class S>
using Metric = Matrix<S>;

template <class S>
S inner(const Metric<S>& g, const Vec<S>& X, const Vec<S>& Y) {
  S out(0);
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (structurally_zero(X[i])) continue;
    for (std::size_t j = 0; j < Y.size(); ++j) {
      if (structurally_zero(Y[j]) || structurally_zero(g(i, j))) continue;
      out += X[i] * g(i, j) * Y[j];
    }
  }
  return out;
}

/// Exact symmetry, and positive leading principal minors at every sample point.
template <class S>
void check_metric(const FramedPatch<S>& P, const Metric<S>& g, double tol = 1e-9) {
  const std::size_t n = P.dim();
  if (g.rows() != n || g.cols() != n) throw InvalidMetric("metric must be n x n");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!near_zero(g(i, j) - g(j, i), tol))
        throw InvalidMetric("metric is not symmetric at (" + P.frame_name(i) + ", " + P.frame_name(j) + ")");
  for (std::size_t m = 1; m <= n; ++m) {
    Matrix<S> minor(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) minor(i, j) = g(i, j);
    const S d = determinant(minor, tol);
    if constexpr (is_exact_v<S>) {
      if (P.is_lie() || d.is_constant()) {
        if (d.is_zero() || d.constant_value() <= 0) throw InvalidMetric("metric is not positive definite (leading minor " + std::to_string(m) + ")");
      } else {
        for (const auto& p : P.sample_points()) {
          const Q v = d.evaluate(p);
          if (v <= 0) throw InvalidMetric("metric is not positive definite at a sample point (leading minor " + std::to_string(m) + ")");
        }
      }
    } else {
      for (std::size_t p = 0; p < d.num_points(); ++p)
        if (d.value(p) <= tol) throw InvalidMetric("metric is not positive definite at sample point " + std::to_string(p));
    }
  }
}

/// g(phi X, phi Y) = g(X, Y) - a1(X) a1(Y) - a2(X) a2(Y), with g(Z_i, X) = a_i(X), g(Z_i, Z_j) = delta_ij.
template <class S>
CheckResult check_compatible(const ContactPairStructure<S>& st, const Metric<S>& g, double tol = 1e-9) {
  const auto& phi = st.phi_or_throw();
  const std::size_t n = st.dim();
  auto e = [&](std::size_t a) { return unit_vec<S>(n, a); };
  auto nm = [&](std::size_t a) { return st.patch.frame_name(a); };
  Tally<S> all("COMPATIBLE", st.frame(), tol);
  {
    Tally<S> t("phi_invariance", st.frame(), tol);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        const S rhs = g(a, b) - st.alpha(1, e(a)) * st.alpha(1, e(b)) - st.alpha(2, e(a)) * st.alpha(2, e(b));
        t.compare(inner(g, phi.col(a), phi.col(b)), rhs, {nm(a), nm(b)}, "g(phi X, phi Y)");
      }
    all.add_sub(t.finish());
  }
  {
    Tally<S> t("reeb_dual", st.frame(), tol);
    for (int i = 1; i <= 2; ++i)
      for (std::size_t a = 0; a < n; ++a)
        t.compare(inner(g, st.reeb_field(i), e(a)), st.alpha(i, e(a)), {"Z" + std::to_string(i), nm(a)}, "g(Z_i, X) = alpha_i(X)");
    all.add_sub(t.finish());
  }
  {
    Tally<S> t("reeb_orthonormal", st.frame(), tol);
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j)
        t.compare(inner(g, st.reeb_field(i), st.reeb_field(j)), S(i == j ? 1 : 0), {"Z" + std::to_string(i), "Z" + std::to_string(j)});
    all.add_sub(t.finish());
  }
  return all.finish();
}

/// g(X, phi Y) = (da1 + da2)(X, Y) and g(X, Z_i) = a_i(X) on frame pairs.
template <class S>
CheckResult check_associated(const ContactPairStructure<S>& st, const Metric<S>& g, double tol = 1e-9) {
  const auto& phi = st.phi_or_throw();
  const std::size_t n = st.dim();
  auto e = [&](std::size_t a) { return unit_vec<S>(n, a); };
  auto nm = [&](std::size_t a) { return st.patch.frame_name(a); };
  const auto D = (st.pair.dalpha1 + st.pair.dalpha2).matrix();
  Tally<S> all("ASSOCIATED", st.frame(), tol);
  {
    Tally<S> t("g_phi", st.frame(), tol);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) t.compare(inner(g, e(a), phi.col(b)), D(a, b), {nm(a), nm(b)}, "g(X, phi Y) = (da1 + da2)(X, Y)");
    all.add_sub(t.finish());
  }
  {
    Tally<S> t("reeb_dual", st.frame(), tol);
    for (int i = 1; i <= 2; ++i)
      for (std::size_t a = 0; a < n; ++a)
        t.compare(inner(g, e(a), st.reeb_field(i)), st.alpha(i, e(a)), {nm(a), "Z" + std::to_string(i)}, "g(X, Z_i) = alpha_i(X)");
    all.add_sub(t.finish());
  }
  return all.finish();
}

/// Phi(X, Y) = g(phi X, Y).
template <class S>
DiffForm<S> fundamental_two_form(const Metric<S>& g, const Endo<S>& phi) {
  const std::size_t n = g.rows();
  const auto M = phi.transposed() * g;
  DiffForm<S> w(n, 2);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) w.set((1u << a) | (1u << b), M(a, b));
  return w;
}

/// Levi-Civita connection: nabla_{e_i} e_j = sum_k G[k][i][j] e_k.
template <class S>
class Connection {
 public:
  Connection(const FramedPatch<S>& P, const Metric<S>& g, double tol = 1e-9) : P_(&P), n_(P.dim()) {
    Metric<S> ginv;
    try {
      ginv = inverse(g, tol);
    } catch (const SingularSystem&) {
      throw InvalidMetric("metric is singular");
    }
    auto gv = [&](const Vec<S>& X, std::size_t k) {
      S out(0);
      for (std::size_t m = 0; m < n_; ++m)
        if (!structurally_zero(X[m])) out += X[m] * g(m, k);
      return out;
    };
    // Koszul: 2 g(nabla_i e_j, e_k)
    std::vector<std::vector<std::vector<S>>> L(n_, std::vector<std::vector<S>>(n_, std::vector<S>(n_, S(0))));
    const S half = S(1) / S(2);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k) {
          S v = gv(P.bracket_frame(i, j), k) - gv(P.bracket_frame(j, k), i) + gv(P.bracket_frame(k, i), j);
          if (!P.is_lie()) v += P.derive(i, g(j, k)) + P.derive(j, g(i, k)) - P.derive(k, g(i, j));
          L[i][j][k] = half * v;
        }
    G_.assign(n_, std::vector<std::vector<S>>(n_, std::vector<S>(n_, S(0))));
    for (std::size_t l = 0; l < n_; ++l)
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
          S v(0);
          for (std::size_t k = 0; k < n_; ++k)
            if (!structurally_zero(ginv(l, k))) v += ginv(l, k) * L[i][j][k];
          G_[l][i][j] = v;
        }
  }

  const S& gamma(std::size_t k, std::size_t i, std::size_t j) const { return G_[k][i][j]; }
  const FramedPatch<S>& patch() const { return *P_; }

  Vec<S> nabla_frame(std::size_t i, std::size_t j) const {
    Vec<S> v(n_);
    for (std::size_t k = 0; k < n_; ++k) v[k] = G_[k][i][j];
    return v;
  }

  /// nabla_X Y for arbitrary fields.
  Vec<S> nabla(const Vec<S>& X, const Vec<S>& Y) const {
    Vec<S> out(n_, S(0));
    for (std::size_t i = 0; i < n_; ++i) {
      if (structurally_zero(X[i])) continue;
      for (std::size_t k = 0; k < n_; ++k) {
        S v = P_->derive(i, Y[k]);
        for (std::size_t j = 0; j < n_; ++j)
          if (!structurally_zero(Y[j]) && !structurally_zero(G_[k][i][j])) v += Y[j] * G_[k][i][j];
        if (!structurally_zero(v)) out[k] += X[i] * v;
      }
    }
    return out;
  }

  /// D[i] = nabla_{e_i} T as an endomorphism field.
  std::vector<Endo<S>> nabla_endo(const Endo<S>& T) const {
    std::vector<Endo<S>> D(n_, Endo<S>(n_, n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k) {
          S v = P_->derive(i, T(k, j));
          for (std::size_t m = 0; m < n_; ++m) {
            if (!structurally_zero(T(m, j)) && !structurally_zero(G_[k][i][m])) v += T(m, j) * G_[k][i][m];
            if (!structurally_zero(G_[m][i][j]) && !structurally_zero(T(k, m))) v -= G_[m][i][j] * T(k, m);
          }
          D[i](k, j) = v;
        }
    return D;
  }

 private:
  const FramedPatch<S>* P_;
  std::size_t n_;
  std::vector<std::vector<std::vector<S>>> G_;
};

/// (nabla_X T) evaluated from the frame derivatives D of nabla_endo.
template <class S>
Endo<S> along(const std::vector<Endo<S>>& D, const Vec<S>& X) {
  const std::size_t n = X.size();
  Endo<S> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    if (!structurally_zero(X[i])) out = out + D[i].scaled(X[i]);
  return out;
}

/// R_{e_i e_j} e_k = sum_l R[l][i][j][k] e_l, with
/// R_{XY} = nabla_X nabla_Y - nabla_Y nabla_X - nabla_{[X,Y]}.
template <class S>
class Curvature {
 public:
  Curvature(const Connection<S>& C) : n_(C.patch().dim()) {
    const auto& P = C.patch();
    R_.assign(n_ * n_ * n_ * n_, S(0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k)
          for (std::size_t l = 0; l < n_; ++l) {
            S v = P.derive(i, C.gamma(l, j, k)) - P.derive(j, C.gamma(l, i, k));
            for (std::size_t m = 0; m < n_; ++m) {
              v += C.gamma(m, j, k) * C.gamma(l, i, m) - C.gamma(m, i, k) * C.gamma(l, j, m);
              const S& c = P.c(m, i, j);
              if (!structurally_zero(c)) v -= c * C.gamma(l, m, k);
            }
            at(l, i, j, k) = v;
            at(l, j, i, k) = -v;
          }
    ric_ = Matrix<S>(n_, n_);
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k) {
        S v(0);
        for (std::size_t i = 0; i < n_; ++i) v += at(i, i, j, k);
        ric_(j, k) = v;
      }
  }

  std::size_t dim() const { return n_; }
  const S& operator()(std::size_t l, std::size_t i, std::size_t j, std::size_t k) const { return R_[((l * n_ + i) * n_ + j) * n_ + k]; }
  const Matrix<S>& ricci() const { return ric_; }

  /// R_{XY} W.
  Vec<S> apply(const Vec<S>& X, const Vec<S>& Y, const Vec<S>& W) const {
    Vec<S> out(n_, S(0));
    for (std::size_t i = 0; i < n_; ++i) {
      if (structurally_zero(X[i])) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (i == j || structurally_zero(Y[j])) continue;
        const S xy = X[i] * Y[j];
        for (std::size_t k = 0; k < n_; ++k) {
          if (structurally_zero(W[k])) continue;
          const S c = xy * W[k];
          for (std::size_t l = 0; l < n_; ++l)
            if (!structurally_zero((*this)(l, i, j, k))) out[l] += c * (*this)(l, i, j, k);
        }
      }
    }
    return out;
  }

  S ricci(const Vec<S>& X, const Vec<S>& Y) const {
    S out(0);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        if (!structurally_zero(X[a]) && !structurally_zero(Y[b])) out += X[a] * ric_(a, b) * Y[b];
    return out;
  }

  bool is_zero(double tol = 1e-9) const {
    for (const auto& v : R_)
      if (!near_zero(v, tol)) return false;
    return true;
  }

 private:
  S& at(std::size_t l, std::size_t i, std::size_t j, std::size_t k) { return R_[((l * n_ + i) * n_ + j) * n_ + k]; }
  std::size_t n_;
  std::vector<S> R_;
  Matrix<S> ric_;
};

class DegeneratePlane : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// K(X, Y) = g(R_{XY}Y, X) / (|X|^2 |Y|^2 - g(X,Y)^2).
template <class S>
S sectional(const Metric<S>& g, const Curvature<S>& R, const Vec<S>& X, const Vec<S>& Y, double tol = 1e-9) {
  const S area = inner(g, X, X) * inner(g, Y, Y) - inner(g, X, Y) * inner(g, X, Y);
  if (near_zero(area, tol)) throw DegeneratePlane("sectional curvature of a degenerate plane");
  return inner(g, R.apply(X, Y, Y), X) / area;
}

/// Ric(X, X) / g(X, X).
template <class S>
S ric_direction(const Metric<S>& g, const Curvature<S>& R, const Vec<S>& X, double tol = 1e-9) {
  const S nn = inner(g, X, X);
  if (near_zero(nn, tol)) throw std::invalid_argument("ric_direction of a null vector");
  return R.ricci(X, X) / nn;
}

/// (L_X g)(e_a, e_b) = X(g_ab) - g([X, e_a], e_b) - g(e_a, [X, e_b]).
template <class S>
Matrix<S> lie_derivative_metric(const FramedPatch<S>& P, const Metric<S>& g, const Vec<S>& X) {
  const std::size_t n = P.dim();
  std::vector<Vec<S>> br;
  for (std::size_t a = 0; a < n; ++a) br.push_back(P.bracket(X, unit_vec<S>(n, a)));
  Matrix<S> L(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) L(a, b) = P.apply(X, g(a, b)) - inner(g, br[a], unit_vec<S>(n, b)) - inner(g, unit_vec<S>(n, a), br[b]);
  return L;
}

template <class S>
bool is_killing(const FramedPatch<S>& P, const Metric<S>& g, const Vec<S>& X, double tol = 1e-9) {
  const auto L = lie_derivative_metric(P, g, X);
  for (std::size_t a = 0; a < P.dim(); ++a)
    for (std::size_t b = 0; b < P.dim(); ++b)
      if (!near_zero(L(a, b), tol)) return false;
  return true;
}

/// Orthogonal projection of V onto the g-normal bundle of span(F).
template <class S>
Vec<S> normal_part(const Metric<S>& g, const std::vector<Vec<S>>& F, const Vec<S>& V, double tol = 1e-9) {
  if (F.empty()) return V;
  const std::size_t m = F.size();
  Matrix<S> G(m, m), rhs(m, 1);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) G(a, b) = inner(g, F[a], F[b]);
    rhs(a, 0) = inner(g, F[a], V);
  }
  const auto c = solve(G, rhs, tol);
  Vec<S> out = V;
  for (std::size_t a = 0; a < m; ++a) out = out - scale(c(a, 0), F[a]);
  return out;
}

/// Second fundamental form sigma(X, Y) = normal part of nabla_X Y for X, Y tangent to span(F).
template <class S>
Vec<S> second_fundamental_form(const Connection<S>& C, const Metric<S>& g, const std::vector<Vec<S>>& F, const Vec<S>& X, const Vec<S>& Y,
                               double tol = 1e-9) {
  return normal_part(g, F, C.nabla(X, Y), tol);
}

/// Mean curvature (unnormalised trace) of the distribution spanned by F.
template <class S>
Vec<S> mean_curvature(const Connection<S>& C, const Metric<S>& g, const std::vector<Vec<S>>& F, double tol = 1e-9) {
  const std::size_t m = F.size(), n = C.patch().dim();
  Vec<S> H = zero_vec<S>(n);
  if (m == 0) return H;
  Matrix<S> G(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) G(a, b) = inner(g, F[a], F[b]);
  const auto Gi = inverse(G, tol);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (!structurally_zero(Gi(a, b))) H = H + scale(Gi(a, b), second_fundamental_form(C, g, F, F[a], F[b], tol));
  return H;
}

/// The tensors A and B built from nabla phi and nabla (phi h).
template <class S>
class ABTensors {
 public:
  ABTensors(const Connection<S>& C, const Metric<S>& g, const Endo<S>& phi, const Endo<S>& h)
      : g_(g), phi_(phi), Dphi_(C.nabla_endo(phi)), Dphih_(C.nabla_endo(phi * h)) {}

  S A(const Vec<S>& X, const Vec<S>& Y, const Vec<S>& W) const {
    const auto pX = phi_ * X, pY = phi_ * Y, pW = phi_ * W;
    const auto NX = along(Dphi_, X), NpX = along(Dphi_, pX);
    return -inner(g_, Y, NX * W) + inner(g_, pY, NX * pW) - inner(g_, Y, NpX * pW) - inner(g_, pY, NpX * W);
  }
  S B(const Vec<S>& X, const Vec<S>& Y, const Vec<S>& W) const {
    const auto pX = phi_ * X, pY = phi_ * Y, pW = phi_ * W;
    const auto NY = along(Dphih_, Y), NpY = along(Dphih_, pY);
    return -inner(g_, X, NY * W) + inner(g_, X, NpY * pW) - inner(g_, pX, NY * pW) - inner(g_, pX, NpY * W);
  }
  /// A(X,Y,W) + B(X,Y,W) - B(X,W,Y).
  S combination(const Vec<S>& X, const Vec<S>& Y, const Vec<S>& W) const { return A(X, Y, W) + B(X, Y, W) - B(X, W, Y); }
  const std::vector<Endo<S>>& nabla_phi() const { return Dphi_; }

 private:
  Metric<S> g_;
  Endo<S> phi_;
  std::vector<Endo<S>> Dphi_, Dphih_;
};

}  // namespace cpgeo
