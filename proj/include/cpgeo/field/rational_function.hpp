#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpgeo/field/polynomial.hpp"

namespace cpgeo {

/// Exact scalar: a quotient p/q of polynomials over Q in the chart variables.
///
/// Canonical form: gcd(p, q) = 1, q monic in graded-lex order (so its leading
/// coefficient is +1), and 0 is stored as 0/1. Two scalars are equal iff their
/// canonical forms coincide, which makes zero-testing decidable.
class RationalFunction {
 public:
  static constexpr bool is_exact = true;

  RationalFunction() : den_(1) {}
  RationalFunction(long c) : num_(Q(c)), den_(1) {}                // NOLINT(google-explicit-constructor)
  RationalFunction(const Q& c) : num_(c), den_(1) {}               // NOLINT(google-explicit-constructor)
  RationalFunction(Polynomial p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    canonicalize();
  }

  static RationalFunction variable(std::size_t v) { return RationalFunction(Polynomial::variable(v)); }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  Q constant_value() const {
    if (!is_constant()) throw std::logic_error("scalar is not constant");
    return num_.constant_value();
  }
  std::size_t num_vars() const { return std::max(num_.num_vars(), den_.num_vars()); }

  bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }

  RationalFunction operator-() const { return raw(-num_, den_); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return a.den_.is_constant() ? raw(a.num_ + b.num_, a.den_) : make(a.num_ + b.num_, a.den_);
    return make(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.den_.is_constant() && b.den_.is_constant()) return raw(a.num_ * b.num_, Polynomial(1));
    // cross-cancel before multiplying keeps intermediate sizes small
    const Polynomial g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
    Polynomial n = *Polynomial::divide_exact(a.num_, g1) * *Polynomial::divide_exact(b.num_, g2);
    Polynomial d = *Polynomial::divide_exact(a.den_, g2) * *Polynomial::divide_exact(b.den_, g1);
    return normalize_lead(std::move(n), std::move(d));
  }

  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("division by zero scalar");
    return a * RationalFunction::raw(b.den_, b.num_, true);
  }

  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

  RationalFunction pow(unsigned e) const { return normalize_lead(num_.pow(e), den_.pow(e)); }

  /// Quotient-rule derivative with respect to chart variable v.
  RationalFunction partial(std::size_t v) const {
    if (den_.is_constant()) return raw(num_.partial(v), den_);
    return make(num_.partial(v) * den_ - num_ * den_.partial(v), den_ * den_);
  }

  Q evaluate(std::span<const Q> point) const {
    const Q d = den_.evaluate(point);
    if (d == 0) throw std::domain_error("scalar has a pole at the evaluation point");
    return num_.evaluate(point) / d;
  }

 private:
  // Already coprime; only fixes the leading-coefficient normalization.
  static RationalFunction normalize_lead(Polynomial n, Polynomial d) {
    RationalFunction r;
    const Q lc = d.leading().c;
    r.num_ = n.scaled(Q(1) / lc);
    r.den_ = d.scaled(Q(1) / lc);
    if (r.num_.is_zero()) r.den_ = Polynomial(1);
    return r;
  }
  static RationalFunction raw(Polynomial n, Polynomial d, bool coprime_only = false) {
    if (coprime_only) return normalize_lead(std::move(n), std::move(d));
    RationalFunction r;
    r.num_ = std::move(n);
    r.den_ = std::move(d);
    if (r.num_.is_zero()) r.den_ = Polynomial(1);
    return r;
  }
  static RationalFunction make(Polynomial n, Polynomial d) {
    RationalFunction r;
    r.num_ = std::move(n);
    r.den_ = std::move(d);
    r.canonicalize();
    return r;
  }

  void canonicalize() {
    if (num_.is_zero()) {
      den_ = Polynomial(1);
      return;
    }
    if (den_.is_constant()) {
      num_ = num_.scaled(Q(1) / den_.constant_value());
      den_ = Polynomial(1);
      return;
    }
    const Polynomial g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = *Polynomial::divide_exact(num_, g);
      den_ = *Polynomial::divide_exact(den_, g);
    }
    const Q lc = den_.leading().c;
    if (lc != 1) {
      num_ = num_.scaled(Q(1) / lc);
      den_ = den_.scaled(Q(1) / lc);
    }
  }

  Polynomial num_;
  Polynomial den_;
};

using Exact = RationalFunction;

inline bool is_zero(const RationalFunction& s) { return s.is_zero(); }
inline bool is_constant(const RationalFunction& s) { return s.is_constant(); }
inline RationalFunction partial(const RationalFunction& s, std::size_t v) { return s.partial(v); }

}  // namespace cpgeo
