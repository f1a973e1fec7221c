#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpgeo/linalg.hpp"

namespace cpgeo {

enum class Presentation { lie, coordinate };

class InvalidPatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sample points for chart presentations: five fixed rational points off
/// the coordinate hyperplanes, then `extra` seeded random ones.
inline std::vector<std::vector<Q>> default_sample_points(std::size_t nvars, std::size_t extra, std::uint64_t seed,
                                                         const std::function<bool(const std::vector<Q>&)>& usable = {}) {
  std::vector<std::vector<Q>> pts;
  auto accept = [&](std::vector<Q> p) {
    if (!usable || usable(p)) pts.push_back(std::move(p));
  };
  for (int t = 0; t < 5; ++t) {
    std::vector<Q> p;
    for (std::size_t v = 0; v < nvars; ++v) {
      Q q(mpz_class(long(2 + t + 3 * long(v))), mpz_class(long(3 + t + long(v))));
      q.canonicalize();
      if ((t + v) % 2 == 1) q = -q;
      p.push_back(q);
    }
    accept(std::move(p));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 4);
  const std::size_t want = pts.size() + extra;
  for (std::size_t tries = 0; pts.size() < want && tries < 100 * (extra + 1); ++tries) {
    std::vector<Q> p;
    for (std::size_t v = 0; v < nvars; ++v) {
      long a = num(rng);
      if (a == 0) a = 1;
      Q q(mpz_class(a), mpz_class(den(rng)));
      q.canonicalize();
      p.push_back(q);
    }
    accept(std::move(p));
  }
  return pts;
}

/// A neighbourhood presented by a frame e_1..e_n: either a Lie frame with
/// constant structure constants, or a coordinate frame e_i = sum a_i^mu d/dx^mu.
template <class S>
class FramedPatch {
 public:
  /// c[k][i][j] is the e_k component of [e_i, e_j].
  using Structure = std::vector<std::vector<std::vector<S>>>;

  static FramedPatch lie(std::size_t n, Structure c) {
    FramedPatch P;
    P.n_ = n;
    P.kind_ = Presentation::lie;
    P.c_ = std::move(c);
    P.frame_ = Matrix<S>::identity(n);
    P.coframe_ = Matrix<S>::identity(n);
    P.samples_ = {{}};
    P.check_shape();
    P.check_lie_axioms();
    return P;
  }

  /// Lie frame from (i, j, k, value) entries meaning [e_i, e_j] has e_k
  /// component `value` (0-based); antisymmetric partners are filled in.
  static FramedPatch lie_from_brackets(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, std::size_t, S>>& entries) {
    Structure c(n, std::vector<std::vector<S>>(n, std::vector<S>(n, S(0))));
    for (const auto& [i, j, k, v] : entries) {
      if (i >= n || j >= n || k >= n) throw InvalidPatch("structure constant index out of range");
      if (i == j) throw InvalidPatch("[e_i, e_i] must vanish");
      c[k][i][j] += v;
      c[k][j][i] -= v;
    }
    return lie(n, std::move(c));
  }

  /// Row i of `a` holds the components of e_i on the coordinate fields.
  static FramedPatch coordinate(std::vector<std::string> vars, Matrix<S> a, std::vector<std::vector<Q>> samples) {
    FramedPatch P;
    P.n_ = vars.size();
    P.kind_ = Presentation::coordinate;
    P.vars_ = std::move(vars);
    P.frame_ = std::move(a);
    P.samples_ = std::move(samples);
    if (P.frame_.rows() != P.n_ || P.frame_.cols() != P.n_) throw InvalidPatch("frame matrix must be n x n");
    try {
      P.coframe_ = inverse(P.frame_.transposed());
    } catch (const SingularSystem&) {
      throw InvalidPatch("frame matrix is not invertible");
    }
    P.compute_structure();
    return P;
  }

  std::size_t dim() const { return n_; }
  Presentation presentation() const { return kind_; }
  bool is_lie() const { return kind_ == Presentation::lie; }
  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t num_vars() const { return vars_.size(); }
  const std::vector<std::vector<Q>>& sample_points() const { return samples_; }
  const Structure& structure() const { return c_; }
  const S& c(std::size_t k, std::size_t i, std::size_t j) const { return c_[k][i][j]; }
  const Matrix<S>& frame_matrix() const { return frame_; }
  /// Row k: components of the dual coframe form w^k on dx^mu.
  const Matrix<S>& coframe() const { return coframe_; }

  std::string frame_name(std::size_t i) const { return "e" + std::to_string(i + 1); }

  /// e_i(f); zero on Lie frames, whose scalars are constants.
  S derive(std::size_t i, const S& f) const {
    if (is_lie()) return S(0);
    S out(0);
    for (std::size_t mu = 0; mu < n_; ++mu) {
      if (structurally_zero(frame_(i, mu))) continue;
      out += frame_(i, mu) * partial(f, mu);
    }
    return out;
  }

  /// X(f) for X given by frame components.
  S apply(const Vec<S>& X, const S& f) const {
    check_vec(X);
    if (is_lie()) return S(0);
    S out(0);
    for (std::size_t i = 0; i < n_; ++i) {
      if (structurally_zero(X[i])) continue;
      out += X[i] * derive(i, f);
    }
    return out;
  }

  Vec<S> bracket_frame(std::size_t i, std::size_t j) const {
    Vec<S> v(n_, S(0));
    for (std::size_t k = 0; k < n_; ++k) v[k] = c_[k][i][j];
    return v;
  }

  Vec<S> bracket(const Vec<S>& X, const Vec<S>& Y) const {
    check_vec(X);
    check_vec(Y);
    Vec<S> out(n_, S(0));
    for (std::size_t i = 0; i < n_; ++i) {
      if (structurally_zero(X[i])) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (structurally_zero(Y[j])) continue;
        const S xy = X[i] * Y[j];
        for (std::size_t k = 0; k < n_; ++k)
          if (!structurally_zero(c_[k][i][j])) out[k] += xy * c_[k][i][j];
      }
    }
    if (!is_lie())
      for (std::size_t k = 0; k < n_; ++k) out[k] += apply(X, Y[k]) - apply(Y, X[k]);
    return out;
  }

  /// Cyclic sum [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]].
  Vec<S> jacobiator(std::size_t i, std::size_t j, std::size_t k) const {
    auto e = [&](std::size_t a) { return unit_vec<S>(n_, a); };
    return bracket(e(i), bracket_frame(j, k)) + bracket(e(j), bracket_frame(k, i)) + bracket(e(k), bracket_frame(i, j));
  }

  /// Same patch with every scalar mapped (used to move to the float backend).
  template <class T, class F>
  FramedPatch<T> convert(F&& f, std::vector<std::vector<Q>> samples) const {
    FramedPatch<T> P;
    P.n_ = n_;
    P.kind_ = kind_;
    P.vars_ = vars_;
    P.samples_ = std::move(samples);
    P.frame_ = frame_.map(f);
    P.coframe_ = coframe_.map(f);
    P.c_.assign(n_, std::vector<std::vector<T>>(n_, std::vector<T>(n_, T(0))));
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) P.c_[k][i][j] = f(c_[k][i][j]);
    return P;
  }

  void check_vec(const Vec<S>& X) const {
    if (X.size() != n_) throw std::invalid_argument("vector field has " + std::to_string(X.size()) + " components on a " + std::to_string(n_) + "-dimensional patch");
  }

 private:
  template <class T>
  friend class FramedPatch;

  void check_shape() const {
    if (n_ < 1) throw InvalidPatch("patch dimension must be positive");
    if (c_.size() != n_) throw InvalidPatch("structure constants have the wrong shape");
    for (const auto& ck : c_) {
      if (ck.size() != n_) throw InvalidPatch("structure constants have the wrong shape");
      for (const auto& row : ck)
        if (row.size() != n_) throw InvalidPatch("structure constants have the wrong shape");
    }
  }

  void check_lie_axioms() const {
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
          if (!is_constant(c_[k][i][j])) throw InvalidPatch("Lie-frame structure constants must be constants");
          if (!structurally_zero(c_[k][i][j] + c_[k][j][i]))
            throw InvalidPatch("structure constants are not antisymmetric in " + frame_name(i) + ", " + frame_name(j));
        }
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        for (std::size_t k = j + 1; k < n_; ++k)
          if (!all_near_zero(jacobiator(i, j, k), 0.0))
            throw InvalidPatch("Jacobi identity fails for (" + frame_name(i) + ", " + frame_name(j) + ", " + frame_name(k) + ")");
  }

  void compute_structure() {
    // c^k_ij = sum_mu (e_i(a_j^mu) - e_j(a_i^mu)) w^k_mu
    c_.assign(n_, std::vector<std::vector<S>>(n_, std::vector<S>(n_, S(0))));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        Vec<S> coord(n_, S(0));
        for (std::size_t mu = 0; mu < n_; ++mu) coord[mu] = derive(i, frame_(j, mu)) - derive(j, frame_(i, mu));
        for (std::size_t k = 0; k < n_; ++k) {
          S v(0);
          for (std::size_t mu = 0; mu < n_; ++mu) v += coord[mu] * coframe_(k, mu);
          c_[k][i][j] = v;
          c_[k][j][i] = -v;
        }
      }
  }

  std::size_t n_ = 0;
  Presentation kind_ = Presentation::lie;
  std::vector<std::string> vars_;
  Matrix<S> frame_;
  Matrix<S> coframe_;
  Structure c_;
  std::vector<std::vector<Q>> samples_;
};

/// Coordinate patch over the exact field, with generated sample points that
/// avoid poles of the frame and zeros of its determinant.
inline FramedPatch<Exact> coordinate_patch(std::vector<std::string> vars, Matrix<Exact> a, std::size_t extra_samples = 20,
                                           std::uint64_t seed = 1, std::vector<std::vector<Q>> samples = {}) {
  const std::size_t n = vars.size();
  if (a.rows() != n || a.cols() != n) throw InvalidPatch("frame matrix must be n x n");
  const Exact det = determinant(a);
  if (det.is_zero()) throw InvalidPatch("frame matrix is not invertible");
  auto regular = [&](const std::vector<Q>& p) {
    if (det.denominator().evaluate(p) == 0 || det.numerator().evaluate(p) == 0) return false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (a(i, j).denominator().evaluate(p) == 0) return false;
    return true;
  };
  if (samples.empty()) {
    samples = default_sample_points(n, extra_samples, seed, regular);
  } else {
    for (const auto& p : samples) {
      if (p.size() != n) throw InvalidPatch("sample point has wrong number of coordinates");
      if (!regular(p)) throw InvalidPatch("frame is degenerate at a supplied sample point");
    }
  }
  return FramedPatch<Exact>::coordinate(std::move(vars), std::move(a), std::move(samples));
}

}  // namespace cpgeo
