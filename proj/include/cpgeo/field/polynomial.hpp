#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cpgeo {

using Q = mpq_class;

/// Exponent vector over the chart variables. Trailing zeros are trimmed so
/// that monomials built against different variable counts compare equal.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<std::uint32_t> exps) : e_(std::move(exps)) { trim(); }

  static Monomial variable(std::size_t v, std::uint32_t power = 1) {
    std::vector<std::uint32_t> e(v + 1, 0);
    e[v] = power;
    return Monomial(std::move(e));
  }

  std::uint32_t operator[](std::size_t v) const { return v < e_.size() ? e_[v] : 0; }
  std::size_t size() const { return e_.size(); }
  bool is_one() const { return e_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (auto x : e_) d += x;
    return d;
  }

  Monomial operator*(const Monomial& o) const {
    std::vector<std::uint32_t> r(std::max(e_.size(), o.e_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (*this)[i] + o[i];
    return Monomial(std::move(r));
  }

  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (e_[i] > o[i]) return false;
    return true;
  }

  /// o / *this, assuming divides(o).
  Monomial quotient_of(const Monomial& o) const {
    std::vector<std::uint32_t> r(o.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = o[i] - (*this)[i];
    return Monomial(std::move(r));
  }

  Monomial without(std::size_t v) const {
    auto r = e_;
    if (v < r.size()) r[v] = 0;
    return Monomial(std::move(r));
  }

  bool operator==(const Monomial&) const = default;

  /// Graded lexicographic order; variable 0 is the most significant.
  friend bool grlex_less(const Monomial& a, const Monomial& b) {
    const unsigned da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }

  const std::vector<std::uint32_t>& exponents() const { return e_; }

 private:
  void trim() {
    while (!e_.empty() && e_.back() == 0) e_.pop_back();
  }
  std::vector<std::uint32_t> e_;
};

struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(b, a); }
};

/// Sparse multivariate polynomial over Q. Terms are kept sorted by
/// descending graded-lex order with no zero coefficients, which makes the
/// representation canonical.
class Polynomial {
 public:
  struct Term {
    Monomial m;
    Q c;
    bool operator==(const Term& o) const { return m == o.m && c == o.c; }
  };

  Polynomial() = default;
  Polynomial(long c) : Polynomial(Q(c)) {}  // NOLINT(google-explicit-constructor)
  Polynomial(const Q& c) {                  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.push_back({Monomial{}, c});
  }

  static Polynomial variable(std::size_t v) { return monomial(Monomial::variable(v), Q(1)); }
  static Polynomial monomial(Monomial m, const Q& c) {
    Polynomial p;
    if (c != 0) p.terms_.push_back({std::move(m), c});
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
  Q constant_value() const { return is_zero() ? Q(0) : (terms_.back().m.is_one() ? terms_.back().c : Q(0)); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }

  std::size_t num_vars() const {
    std::size_t n = 0;
    for (const auto& t : terms_) n = std::max(n, t.m.size());
    return n;
  }
  unsigned total_degree() const { return terms_.empty() ? 0 : terms_.front().m.degree(); }
  unsigned degree_in(std::size_t v) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.m[v]);
    return d;
  }
  bool involves(std::size_t v) const { return degree_in(v) > 0; }

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.constant_value());
    if (b.is_constant()) return a.scaled(b.constant_value());
    std::map<Monomial, Q, GrlexGreater> acc;
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) acc[s.m * t.m] += s.c * t.c;
    Polynomial r;
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (c != 0) r.terms_.push_back({m, c});
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const Q& s) const {
    if (s == 0) return {};
    Polynomial r = *this;
    for (auto& t : r.terms_) t.c *= s;
    return r;
  }

  Polynomial pow(unsigned e) const {
    Polynomial r(1), base = *this;
    while (e) {
      if (e & 1u) r *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return r;
  }

  Polynomial partial(std::size_t v) const {
    std::map<Monomial, Q, GrlexGreater> acc;
    for (const auto& t : terms_) {
      const auto e = t.m[v];
      if (e == 0) continue;
      auto ex = t.m.exponents();
      ex[v] -= 1;
      acc[Monomial(std::move(ex))] += t.c * e;
    }
    Polynomial r;
    for (auto& [m, c] : acc)
      if (c != 0) r.terms_.push_back({m, c});
    return r;
  }

  /// Divides by the leading coefficient (graded-lex), so the result is monic.
  Polynomial monic() const {
    if (is_zero()) return {};
    return scaled(Q(1) / leading().c);
  }

  Q evaluate(std::span<const Q> point) const {
    Q acc = 0;
    for (const auto& t : terms_) {
      Q v = t.c;
      for (std::size_t i = 0; i < t.m.size(); ++i) {
        if (t.m[i] == 0) continue;
        if (i >= point.size()) throw std::out_of_range("evaluation point has too few coordinates");
        Q p;
        mpz_pow_ui(p.get_num_mpz_t(), point[i].get_num_mpz_t(), t.m[i]);
        mpz_pow_ui(p.get_den_mpz_t(), point[i].get_den_mpz_t(), t.m[i]);
        p.canonicalize();
        v *= p;
      }
      acc += v;
    }
    return acc;
  }

  /// Coefficients with respect to variable v, indexed by the power of v.
  std::vector<Polynomial> coefficients_in(std::size_t v) const {
    std::vector<Polynomial> out(degree_in(v) + 1);
    std::vector<std::map<Monomial, Q, GrlexGreater>> acc(out.size());
    for (const auto& t : terms_) acc[t.m[v]][t.m.without(v)] += t.c;
    for (std::size_t d = 0; d < out.size(); ++d)
      for (auto& [m, c] : acc[d])
        if (c != 0) out[d].terms_.push_back({m, c});
    return out;
  }

  Polynomial leading_coefficient_in(std::size_t v) const { return coefficients_in(v).back(); }

  /// Exact quotient a / b, or nullopt when b does not divide a.
  static std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (b.is_constant()) return a.scaled(Q(1) / b.constant_value());
    Polynomial q, r = a;
    const auto& lb = b.leading();
    while (!r.is_zero()) {
      const auto& lr = r.leading();
      if (!lb.m.divides(lr.m)) return std::nullopt;
      auto t = monomial(lb.m.quotient_of(lr.m), lr.c / lb.c);
      q += t;
      r -= t * b;
    }
    return q;
  }

 private:
  static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
    Polynomial r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && grlex_less(b.terms_[j].m, a.terms_[i].m))) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || grlex_less(a.terms_[i].m, b.terms_[j].m)) {
        r.terms_.push_back({b.terms_[j].m, subtract ? Q(-b.terms_[j].c) : b.terms_[j].c});
        ++j;
      } else {
        Q c = subtract ? Q(a.terms_[i].c - b.terms_[j].c) : Q(a.terms_[i].c + b.terms_[j].c);
        if (c != 0) r.terms_.push_back({a.terms_[i].m, c});
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

namespace detail {

inline std::optional<std::size_t> lowest_variable(const Polynomial& a, const Polynomial& b) {
  std::optional<std::size_t> best;
  for (const auto* p : {&a, &b})
    for (const auto& t : p->terms())
      for (std::size_t i = 0; i < t.m.size(); ++i)
        if (t.m[i] > 0 && (!best || i < *best)) best = i;
  return best;
}

inline Polynomial gcd_impl(const Polynomial& a, const Polynomial& b);

inline Polynomial content_in(const Polynomial& p, std::size_t v) {
  Polynomial g;
  for (const auto& c : p.coefficients_in(v)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c.monic() : gcd_impl(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

inline Polynomial primitive_part_in(const Polynomial& p, std::size_t v) {
  if (p.is_zero()) return p;
  return *Polynomial::divide_exact(p, content_in(p, v));
}

/// Pseudo-remainder of a by b, viewed as univariate polynomials in v.
inline Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, std::size_t v) {
  const unsigned db = b.degree_in(v);
  const Polynomial lb = b.leading_coefficient_in(v);
  while (!a.is_zero() && a.degree_in(v) >= db) {
    const unsigned d = a.degree_in(v);
    const Polynomial la = a.leading_coefficient_in(v);
    a = lb * a - la * Polynomial::monomial(Monomial::variable(v, d - db), Q(1)) * b;
  }
  return a;
}

inline Polynomial gcd_impl(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  const std::size_t v = *lowest_variable(a, b);
  if (!a.involves(v) || !b.involves(v)) {
    const Polynomial& with = a.involves(v) ? a : b;
    const Polynomial& other = a.involves(v) ? b : a;
    Polynomial g = other.monic();
    for (const auto& c : with.coefficients_in(v)) {
      if (c.is_zero()) continue;
      g = gcd_impl(g, c);
      if (g.is_constant()) return Polynomial(1);
    }
    return g;
  }
  const Polynomial ca = content_in(a, v), cb = content_in(b, v);
  const Polynomial cont = gcd_impl(ca, cb);
  Polynomial p = *Polynomial::divide_exact(a, ca);
  Polynomial q = *Polynomial::divide_exact(b, cb);
  if (p.degree_in(v) < q.degree_in(v)) std::swap(p, q);
  while (true) {
    Polynomial r = pseudo_remainder(p, q, v);
    if (r.is_zero()) break;
    if (r.degree_in(v) == 0) {
      q = Polynomial(1);
      break;
    }
    p = std::move(q);
    q = primitive_part_in(r, v);
  }
  return (cont * primitive_part_in(q, v)).monic();
}

}  // namespace detail

/// Monic greatest common divisor over Q (gcd(0, 0) = 0).
inline Polynomial gcd(const Polynomial& a, const Polynomial& b) { return detail::gcd_impl(a, b); }

}  // namespace cpgeo
