#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpgeo/patch.hpp"

namespace cpgeo {

namespace detail {

inline std::vector<std::size_t> mask_indices(std::uint32_t m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; m; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

/// Sign of the shuffle that sorts I followed by J (disjoint masks).
inline int shuffle_sign(std::uint32_t I, std::uint32_t J) {
  int inversions = 0;
  for (auto i : mask_indices(I)) inversions += std::popcount(J & ((1u << i) - 1u));
  return inversions % 2 ? -1 : 1;
}

inline Q factorial(unsigned n) {
  mpz_class f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return Q(f);
}

// all masks with p bits among the lowest n
inline void masks_of_size(std::size_t n, std::size_t p, std::vector<std::uint32_t>& out, std::size_t start = 0, std::uint32_t acc = 0) {
  if (p == 0) {
    out.push_back(acc);
    return;
  }
  for (std::size_t i = start; i + p <= n; ++i) masks_of_size(n, p - 1, out, i + 1, acc | (1u << i));
}

}  // namespace detail

/// A p-form stored by its values on increasing frame tuples, keyed by the
/// bitmask of the tuple. Evaluation on arbitrary vectors is the alternating
/// multilinear extension.
template <class S>
class DiffForm {
 public:
  DiffForm() = default;
  DiffForm(std::size_t dim, std::size_t degree) : n_(dim), p_(degree) {
    if (dim > 31) throw std::invalid_argument("forms are limited to 31 dimensions");
  }

  static DiffForm function(std::size_t dim, const S& f) {
    DiffForm w(dim, 0);
    w.set(0u, f);
    return w;
  }
  static DiffForm one_form(const Vec<S>& comps) {
    DiffForm w(comps.size(), 1);
    for (std::size_t i = 0; i < comps.size(); ++i) w.set(1u << i, comps[i]);
    return w;
  }
  /// The dual coframe form w^i of the frame.
  static DiffForm coframe(std::size_t dim, std::size_t i) { return one_form(unit_vec<S>(dim, i)); }

  std::size_t dim() const { return n_; }
  std::size_t degree() const { return p_; }
  const std::map<std::uint32_t, S>& components() const { return c_; }

  S get(std::uint32_t mask) const {
    auto it = c_.find(mask);
    return it == c_.end() ? S(0) : it->second;
  }
  void set(std::uint32_t mask, const S& v) {
    if (std::size_t(std::popcount(mask)) != p_) throw std::logic_error("component has the wrong degree");
    if (structurally_zero(v)) c_.erase(mask);
    else c_[mask] = v;
  }

  /// Value on frame fields e_{idx[0]}, ..., in the given (not necessarily sorted) order.
  S at(const std::vector<std::size_t>& idx) const {
    if (idx.size() != p_) throw std::invalid_argument("wrong number of arguments for form");
    std::uint32_t m = 0;
    int inversions = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (m & (1u << idx[a])) return S(0);
      inversions += std::popcount(m & ~((1u << (idx[a] + 1)) - 1u));
      m |= 1u << idx[a];
    }
    S v = get(m);
    return inversions % 2 ? -v : v;
  }

  /// Alternating multilinear evaluation on arbitrary vector fields.
  S operator()(const std::vector<Vec<S>>& X) const {
    if (X.size() != p_) throw std::invalid_argument("wrong number of arguments for form");
    S out(0);
    for (const auto& [mask, v] : c_) {
      const auto K = detail::mask_indices(mask);
      std::vector<std::size_t> perm(K.size());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
      S det(0);
      do {
        S term(1);
        for (std::size_t a = 0; a < p_ && !structurally_zero(term); ++a) term *= X[a][K[perm[a]]];
        if (structurally_zero(term)) continue;
        det += permutation_sign(perm) > 0 ? term : -term;
      } while (std::next_permutation(perm.begin(), perm.end()));
      out += v * det;
    }
    return out;
  }
  S operator()(const Vec<S>& X) const { return (*this)(std::vector<Vec<S>>{X}); }
  S operator()(const Vec<S>& X, const Vec<S>& Y) const { return (*this)(std::vector<Vec<S>>{X, Y}); }

  /// 2-forms only: M(a, b) = w(e_a, e_b).
  Matrix<S> matrix() const {
    if (p_ != 2) throw std::logic_error("matrix() needs a 2-form");
    Matrix<S> M(n_, n_);
    for (const auto& [mask, v] : c_) {
      const auto K = detail::mask_indices(mask);
      M(K[0], K[1]) = v;
      M(K[1], K[0]) = -v;
    }
    return M;
  }

  bool is_zero(double tol = 0.0) const {
    for (const auto& [m, v] : c_)
      if (!near_zero(v, tol)) return false;
    return true;
  }

  friend DiffForm operator+(DiffForm a, const DiffForm& b) {
    a.check_same(b);
    for (const auto& [m, v] : b.c_) a.set(m, a.get(m) + v);
    return a;
  }
  friend DiffForm operator-(DiffForm a, const DiffForm& b) {
    a.check_same(b);
    for (const auto& [m, v] : b.c_) a.set(m, a.get(m) - v);
    return a;
  }
  DiffForm operator-() const {
    DiffForm r = *this;
    for (auto& [m, v] : r.c_) v = -v;
    return r;
  }
  friend DiffForm operator*(const S& s, DiffForm a) {
    DiffForm r(a.n_, a.p_);
    for (const auto& [m, v] : a.c_) r.set(m, s * v);
    return r;
  }

  template <class T, class F>
  DiffForm<T> convert(F&& f) const {
    DiffForm<T> r(n_, p_);
    for (const auto& [m, v] : c_) r.set(m, f(v));
    return r;
  }

 private:
  static int permutation_sign(const std::vector<std::size_t>& perm) {
    int inv = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j) inv += perm[i] > perm[j];
    return inv % 2 ? -1 : 1;
  }
  void check_same(const DiffForm& o) const {
    if (n_ != o.n_ || p_ != o.p_) throw std::invalid_argument("forms of different shape");
  }

  std::size_t n_ = 0, p_ = 0;
  std::map<std::uint32_t, S> c_;
};

/// Wedge product with the alternation normalisation: for 1-forms
/// (w ^ n)(X, Y) = 1/2 (w(X) n(Y) - w(Y) n(X)).
template <class S>
DiffForm<S> wedge(const DiffForm<S>& a, const DiffForm<S>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge of forms on different patches");
  const std::size_t p = a.degree(), q = b.degree(), n = a.dim();
  DiffForm<S> r(n, p + q);
  if (p + q > n) return r;
  const S norm(detail::factorial(p) * detail::factorial(q) / detail::factorial(p + q));
  std::map<std::uint32_t, S> acc;
  for (const auto& [I, x] : a.components())
    for (const auto& [J, y] : b.components()) {
      if (I & J) continue;
      const S t = x * y;
      acc[I | J] += detail::shuffle_sign(I, J) > 0 ? t : -t;
    }
  for (auto& [m, v] : acc) r.set(m, norm * v);
  return r;
}

/// m-fold wedge power; power 0 is the constant function 1.
template <class S>
DiffForm<S> wedge_power(const DiffForm<S>& w, unsigned m) {
  DiffForm<S> r = DiffForm<S>::function(w.dim(), S(1));
  for (unsigned i = 0; i < m; ++i) r = wedge(r, w);
  return r;
}

namespace detail {

// w(V, e_rest...) with rest sorted, V arbitrary
template <class S>
S eval_first_arbitrary(const DiffForm<S>& w, const Vec<S>& V, std::uint32_t rest) {
  S out(0);
  for (std::size_t m = 0; m < V.size(); ++m) {
    if (structurally_zero(V[m]) || (rest & (1u << m))) continue;
    const int s = std::popcount(rest & ((1u << m) - 1u)) % 2 ? -1 : 1;
    const S v = w.get(rest | (1u << m));
    if (structurally_zero(v)) continue;
    out += s > 0 ? V[m] * v : -(V[m] * v);
  }
  return out;
}

}  // namespace detail

/// Exterior derivative, normalised so that on 1-forms
/// dw(X, Y) = 1/2 (X w(Y) - Y w(X) - w([X, Y])); on p-forms the same
/// alternating sum carries 1/(p+1).
template <class S>
DiffForm<S> ext_d(const FramedPatch<S>& P, const DiffForm<S>& w) {
  const std::size_t n = P.dim(), p = w.degree();
  if (w.dim() != n) throw std::invalid_argument("form does not live on this patch");
  DiffForm<S> r(n, p + 1);
  if (p + 1 > n) return r;
  std::vector<std::uint32_t> masks;
  detail::masks_of_size(n, p + 1, masks);
  const S norm = S(1) / S(long(p + 1));
  for (auto K : masks) {
    const auto k = detail::mask_indices(K);
    S sum(0);
    for (std::size_t a = 0; a <= p; ++a) {
      const S t = P.derive(k[a], w.get(K & ~(1u << k[a])));
      sum += a % 2 ? -t : t;
    }
    for (std::size_t a = 0; a <= p; ++a)
      for (std::size_t b = a + 1; b <= p; ++b) {
        const std::uint32_t rest = K & ~(1u << k[a]) & ~(1u << k[b]);
        const S t = detail::eval_first_arbitrary(w, P.bracket_frame(k[a], k[b]), rest);
        sum += (a + b) % 2 ? -t : t;
      }
    r.set(K, norm * sum);
  }
  return r;
}

/// (i_X w)(Y_2, ..., Y_p) = w(X, Y_2, ..., Y_p).
template <class S>
DiffForm<S> interior(const Vec<S>& X, const DiffForm<S>& w) {
  if (w.degree() == 0) throw std::invalid_argument("interior product of a 0-form");
  const std::size_t n = w.dim(), p = w.degree();
  DiffForm<S> r(n, p - 1);
  std::vector<std::uint32_t> masks;
  detail::masks_of_size(n, p - 1, masks);
  for (auto J : masks) r.set(J, detail::eval_first_arbitrary(w, X, J));
  return r;
}

/// (L_X w)(Y_1..Y_p) = X(w(Y..)) - sum_a w(.., [X, Y_a], ..) on frame arguments.
template <class S>
DiffForm<S> lie_derivative(const FramedPatch<S>& P, const Vec<S>& X, const DiffForm<S>& w) {
  const std::size_t n = P.dim(), p = w.degree();
  DiffForm<S> r(n, p);
  std::vector<std::uint32_t> masks;
  detail::masks_of_size(n, p, masks);
  for (auto K : masks) {
    const auto k = detail::mask_indices(K);
    S v = P.apply(X, w.get(K));
    for (std::size_t a = 0; a < p; ++a) {
      const Vec<S> br = P.bracket(X, unit_vec<S>(n, k[a]));
      std::vector<Vec<S>> args;
      for (std::size_t b = 0; b < p; ++b) args.push_back(b == a ? br : unit_vec<S>(n, k[b]));
      v -= w(args);
    }
    r.set(K, v);
  }
  return r;
}

/// Endomorphism fields are matrices with T(e_j) = sum_i T(i, j) e_i.
template <class S>
using Endo = Matrix<S>;

/// (L_X T)(Y) = [X, TY] - T[X, Y], assembled column by column on the frame.
template <class S>
Endo<S> lie_derivative_endo(const FramedPatch<S>& P, const Vec<S>& X, const Endo<S>& T) {
  const std::size_t n = P.dim();
  Endo<S> r(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec<S> ej = unit_vec<S>(n, j);
    const Vec<S> col = P.bracket(X, T.col(j)) - T * P.bracket(X, ej);
    for (std::size_t i = 0; i < n; ++i) r(i, j) = col[i];
  }
  return r;
}

/// Nijenhuis torsion [T,T](X,Y) = T^2[X,Y] + [TX,TY] - T[TX,Y] - T[X,TY].
template <class S>
Vec<S> nijenhuis(const FramedPatch<S>& P, const Endo<S>& T, const Vec<S>& X, const Vec<S>& Y) {
  const Vec<S> TX = T * X, TY = T * Y;
  return T * (T * P.bracket(X, Y)) + P.bracket(TX, TY) - T * P.bracket(TX, Y) - T * P.bracket(X, TY);
}

/// Sum of coefficient * w^i ^ w^j terms: the 2-form given by structure-equation data.
template <class S>
DiffForm<S> two_form_from_terms(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, S>>& terms) {
  DiffForm<S> r(n, 2);
  for (const auto& [i, j, s] : terms) r = r + s * wedge(DiffForm<S>::coframe(n, i), DiffForm<S>::coframe(n, j));
  return r;
}

}  // namespace cpgeo
