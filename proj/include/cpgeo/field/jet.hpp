#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpgeo/field/rational_function.hpp"

namespace cpgeo {

/// Shared layout for truncated Taylor expansions at a fixed list of sample
/// points. Basis monomials in the offsets are ordered by total degree.
class JetSpace {
 public:
  struct Pair {
    std::uint32_t a, b, out;
  };
  struct Shift {
    std::uint32_t src, dst;
    double factor;
  };

  JetSpace(std::size_t nvars, int order, std::vector<std::vector<Q>> points, double tol = 1e-9)
      : nvars_(nvars), order_(order), tol_(tol), exact_points_(std::move(points)) {
    if (order < 0) throw std::invalid_argument("jet order must be nonnegative");
    if (exact_points_.empty()) throw std::invalid_argument("float scalars need at least one sample point");
    for (const auto& p : exact_points_) {
      if (p.size() != nvars) throw std::invalid_argument("sample point has wrong number of coordinates");
      std::vector<double> d;
      for (const auto& q : p) d.push_back(q.get_d());
      points_.push_back(std::move(d));
    }
    build_basis();
    build_tables();
  }

  std::size_t nvars() const { return nvars_; }
  int order() const { return order_; }
  double tol() const { return tol_; }
  std::size_t size() const { return basis_.size(); }
  std::size_t num_points() const { return points_.size(); }
  const std::vector<std::vector<double>>& points() const { return points_; }
  const std::vector<std::vector<Q>>& exact_points() const { return exact_points_; }
  const std::vector<std::uint32_t>& exponents(std::size_t i) const { return basis_[i]; }
  unsigned degree(std::size_t i) const { return degree_[i]; }
  /// First basis index of degree > d.
  std::size_t end_of_degree(int d) const { return d < 0 ? 0 : degree_end_[std::min<std::size_t>(d, order_)]; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  const std::vector<Shift>& shifts(std::size_t v) const { return shifts_[v]; }
  std::size_t index_of(const std::vector<std::uint32_t>& e) const {
    auto it = index_.find(e);
    return it == index_.end() ? size() : it->second;
  }

 private:
  void build_basis() {
    std::vector<std::uint32_t> e(nvars_, 0);
    for (int d = 0; d <= order_; ++d) {
      emit(e, 0, d, d);
      degree_end_.push_back(basis_.size());
    }
    for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = i;
  }

  // all exponent vectors of total degree `total`, lexicographically descending
  void emit(std::vector<std::uint32_t>& e, std::size_t v, int left, int total) {
    if (v + 1 >= nvars_) {
      if (nvars_ == 0) {
        if (left == 0) push(e, total);
        return;
      }
      e[v] = left;
      push(e, total);
      e[v] = 0;
      return;
    }
    for (int x = left; x >= 0; --x) {
      e[v] = x;
      emit(e, v + 1, left - x, total);
    }
    e[v] = 0;
  }
  void push(const std::vector<std::uint32_t>& e, int total) {
    basis_.push_back(e);
    degree_.push_back(total);
  }

  void build_tables() {
    const std::size_t n = size();
    for (std::size_t out = 0; out < n; ++out)
      for (std::size_t a = 0; a < n; ++a) {
        if (degree_[a] > degree_[out]) break;
        bool ok = true;
        std::vector<std::uint32_t> rest(nvars_);
        for (std::size_t v = 0; v < nvars_ && ok; ++v) {
          if (basis_[a][v] > basis_[out][v]) ok = false;
          else rest[v] = basis_[out][v] - basis_[a][v];
        }
        if (ok) pairs_.push_back({std::uint32_t(a), std::uint32_t(index_.at(rest)), std::uint32_t(out)});
      }
    shifts_.resize(nvars_);
    for (std::size_t v = 0; v < nvars_; ++v)
      for (std::size_t m = 0; m < n; ++m) {
        if (int(degree_[m]) >= order_) continue;
        auto up = basis_[m];
        up[v] += 1;
        shifts_[v].push_back({std::uint32_t(index_.at(up)), std::uint32_t(m), double(up[v])});
      }
  }

  std::size_t nvars_;
  int order_;
  double tol_;
  std::vector<std::vector<Q>> exact_points_;
  std::vector<std::vector<double>> points_;
  std::vector<std::vector<std::uint32_t>> basis_;
  std::vector<unsigned> degree_;
  std::vector<std::size_t> degree_end_;
  std::map<std::vector<std::uint32_t>, std::size_t> index_;
  std::vector<Pair> pairs_;  // sorted by output index
  std::vector<std::vector<Shift>> shifts_;
};

/// Float scalar: the Taylor jet of a field at every sample point. Each
/// derivative consumes one order of the expansion; `order()` tracks what is
/// still valid. Constants carry no space and broadcast against any jet.
class SampledJet {
 public:
  static constexpr bool is_exact = false;

  SampledJet() = default;
  SampledJet(int c) : value_(double(c)) {}         // NOLINT(google-explicit-constructor)
  SampledJet(long c) : value_(double(c)) {}        // NOLINT(google-explicit-constructor)
  SampledJet(double c) : value_(c) {}              // NOLINT(google-explicit-constructor)
  SampledJet(const Q& c) : value_(c.get_d()) {}    // NOLINT(google-explicit-constructor)

  static SampledJet variable(std::shared_ptr<const JetSpace> sp, std::size_t v) {
    SampledJet r = zeros(sp, sp->order());
    std::vector<std::uint32_t> e(sp->nvars(), 0);
    e[v] = 1;
    const std::size_t lin = sp->order() >= 1 ? sp->index_of(e) : sp->size();
    for (std::size_t p = 0; p < sp->num_points(); ++p) {
      r.at(p, 0) = sp->points()[p][v];
      if (lin < sp->size()) r.at(p, lin) = 1.0;
    }
    return r;
  }

  /// Exact Taylor expansion of a rational function, rounded once per coefficient.
  static SampledJet from_exact(const RationalFunction& f, const std::shared_ptr<const JetSpace>& sp) {
    if (f.is_constant()) return SampledJet(f.constant_value());
    SampledJet num = taylor(f.numerator(), sp), den = taylor(f.denominator(), sp);
    return num / den;
  }

  bool is_constant() const { return !sp_; }
  bool has_space() const { return bool(sp_); }
  const std::shared_ptr<const JetSpace>& space() const { return sp_; }
  int order() const { return sp_ ? order_ : 1 << 20; }
  std::size_t num_points() const { return sp_ ? sp_->num_points() : 1; }
  double constant_value() const { return value_; }

  double value(std::size_t p) const { return sp_ ? c_[p * sp_->size()] : value_; }
  double coeff(std::size_t p, std::size_t m) const {
    if (!sp_) return m == 0 ? value_ : 0.0;
    return c_[p * sp_->size() + m];
  }

  /// Largest |value| over the sample points, and where it occurs.
  double magnitude() const {
    double m = 0;
    for (std::size_t p = 0; p < num_points(); ++p) m = std::max(m, std::abs(value(p)));
    return m;
  }
  std::size_t worst_point() const {
    std::size_t best = 0;
    for (std::size_t p = 1; p < num_points(); ++p)
      if (std::abs(value(p)) > std::abs(value(best))) best = p;
    return best;
  }
  double min_magnitude() const {
    double m = std::abs(value(0));
    for (std::size_t p = 1; p < num_points(); ++p) m = std::min(m, std::abs(value(p)));
    return m;
  }

  bool is_zero(double tol) const { return magnitude() <= tol; }
  bool is_zero() const { return is_zero(sp_ ? sp_->tol() : 1e-9); }

  /// True when every point carries the same value and no variation.
  bool looks_constant(double tol) const {
    if (!sp_) return true;
    const double v0 = value(0);
    for (std::size_t p = 0; p < num_points(); ++p) {
      if (std::abs(value(p) - v0) > tol) return false;
      for (std::size_t m = 1; m < sp_->end_of_degree(order_); ++m)
        if (std::abs(coeff(p, m)) > tol) return false;
    }
    return true;
  }

  SampledJet operator-() const {
    SampledJet r = *this;
    r.value_ = -r.value_;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend SampledJet operator+(const SampledJet& a, const SampledJet& b) { return combine(a, b, 1.0); }
  friend SampledJet operator-(const SampledJet& a, const SampledJet& b) { return combine(a, b, -1.0); }

  friend SampledJet operator*(const SampledJet& a, const SampledJet& b) {
    if (!a.sp_ && !b.sp_) return SampledJet(a.value_ * b.value_);
    if (!a.sp_) return b.scaled(a.value_);
    if (!b.sp_) return a.scaled(b.value_);
    const auto& sp = same_space(a, b);
    SampledJet r = zeros(a.sp_, std::min(a.order_, b.order_));
    const std::size_t n = sp.size(), limit = sp.end_of_degree(r.order_);
    for (std::size_t p = 0; p < sp.num_points(); ++p) {
      const double* x = &a.c_[p * n];
      const double* y = &b.c_[p * n];
      double* z = &r.c_[p * n];
      for (const auto& pr : sp.pairs()) {
        if (pr.out >= limit) break;
        z[pr.out] += x[pr.a] * y[pr.b];
      }
    }
    return r;
  }

  friend SampledJet operator/(const SampledJet& a, const SampledJet& b) {
    if (!b.sp_) {
      if (b.value_ == 0.0) throw std::domain_error("division by zero scalar");
      return a.scaled(1.0 / b.value_);
    }
    return a * b.reciprocal();
  }

  SampledJet& operator+=(const SampledJet& o) { return *this = *this + o; }
  SampledJet& operator-=(const SampledJet& o) { return *this = *this - o; }
  SampledJet& operator*=(const SampledJet& o) { return *this = *this * o; }
  SampledJet& operator/=(const SampledJet& o) { return *this = *this / o; }

  SampledJet pow(unsigned e) const {
    SampledJet r(1L), base = *this;
    while (e) {
      if (e & 1u) r *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return r;
  }

  SampledJet partial(std::size_t v) const {
    if (!sp_) return SampledJet(0L);
    if (order_ == 0) throw std::logic_error("jet order exhausted by differentiation; raise the jet order");
    SampledJet r = zeros(sp_, order_ - 1);
    const std::size_t n = sp_->size(), limit = sp_->end_of_degree(r.order_);
    for (std::size_t p = 0; p < sp_->num_points(); ++p)
      for (const auto& s : sp_->shifts(v))
        if (s.dst < limit) r.c_[p * n + s.dst] = s.factor * c_[p * n + s.src];
    return r;
  }

 private:
  static SampledJet zeros(std::shared_ptr<const JetSpace> sp, int order) {
    SampledJet r;
    r.order_ = order;
    r.c_.assign(sp->size() * sp->num_points(), 0.0);
    r.sp_ = std::move(sp);
    return r;
  }

  double& at(std::size_t p, std::size_t m) { return c_[p * sp_->size() + m]; }

  static const JetSpace& same_space(const SampledJet& a, const SampledJet& b) {
    if (a.sp_ != b.sp_) throw std::logic_error("float scalars from different sample spaces");
    return *a.sp_;
  }

  SampledJet scaled(double s) const {
    SampledJet r = *this;
    r.value_ *= s;
    for (auto& x : r.c_) x *= s;
    return r;
  }

  static SampledJet combine(const SampledJet& a, const SampledJet& b, double sb) {
    if (!a.sp_ && !b.sp_) return SampledJet(a.value_ + sb * b.value_);
    if (!b.sp_) {
      SampledJet r = a;
      for (std::size_t p = 0; p < r.num_points(); ++p) r.at(p, 0) += sb * b.value_;
      return r;
    }
    if (!a.sp_) {
      SampledJet r = b.scaled(sb);
      for (std::size_t p = 0; p < r.num_points(); ++p) r.at(p, 0) += a.value_;
      return r;
    }
    same_space(a, b);
    SampledJet r = zeros(a.sp_, std::min(a.order_, b.order_));
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + sb * b.c_[i];
    return r;
  }

  SampledJet reciprocal() const {
    SampledJet r = zeros(sp_, order_);
    const std::size_t n = sp_->size(), limit = sp_->end_of_degree(order_);
    for (std::size_t p = 0; p < sp_->num_points(); ++p) {
      const double* b = &c_[p * n];
      double* z = &r.c_[p * n];
      if (std::abs(b[0]) < 1e-300) throw std::domain_error("float scalar vanishes at a sample point");
      const double inv = 1.0 / b[0];
      z[0] = inv;
      // pairs are sorted by output; each output only needs lower-degree terms of z
      std::size_t out = 1;
      double acc = 0;
      for (const auto& pr : sp_->pairs()) {
        if (pr.out >= limit) break;
        if (pr.out == 0) continue;
        if (pr.out != out) {
          z[out] = -inv * acc;
          out = pr.out;
          acc = 0;
        }
        if (pr.a != 0) acc += b[pr.a] * z[pr.b];
      }
      if (out < limit) z[out] = -inv * acc;
    }
    return r;
  }

  static SampledJet taylor(const Polynomial& f, const std::shared_ptr<const JetSpace>& sp) {
    SampledJet r = zeros(sp, sp->order());
    const std::size_t nv = sp->nvars();
    for (std::size_t p = 0; p < sp->num_points(); ++p) {
      const auto& pt = sp->exact_points()[p];
      // f(pt + d) expanded exactly in the offsets d
      std::vector<Polynomial> shifted(nv);
      for (std::size_t v = 0; v < nv; ++v) shifted[v] = Polynomial(pt[v]) + Polynomial::variable(v);
      Polynomial acc;
      for (const auto& t : f.terms()) {
        Polynomial term(t.c);
        for (std::size_t v = 0; v < t.m.size(); ++v)
          if (t.m[v]) {
            if (v >= nv) throw std::out_of_range("scalar uses more variables than the chart declares");
            term *= shifted[v].pow(t.m[v]);
          }
        acc += term;
      }
      for (const auto& t : acc.terms()) {
        if (int(t.m.degree()) > sp->order()) continue;
        std::vector<std::uint32_t> e(nv, 0);
        for (std::size_t v = 0; v < t.m.size(); ++v) e[v] = t.m[v];
        r.at(p, sp->index_of(e)) = t.c.get_d();
      }
    }
    return r;
  }

  std::shared_ptr<const JetSpace> sp_;
  int order_ = 0;
  double value_ = 0.0;
  std::vector<double> c_;
};

using Float = SampledJet;

inline bool is_zero(const SampledJet& s) { return s.is_zero(); }
inline bool is_constant(const SampledJet& s) { return s.is_constant(); }
inline SampledJet partial(const SampledJet& s, std::size_t v) { return s.partial(v); }

}  // namespace cpgeo
