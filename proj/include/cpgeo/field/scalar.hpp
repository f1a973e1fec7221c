#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cpgeo/field/jet.hpp"
#include "cpgeo/field/rational_function.hpp"
#include "cpgeo/field/scalar_text.hpp"

namespace cpgeo {

// Backend hooks used by the generic geometry code. Exact scalars ignore the
// tolerance; float scalars compare sampled values against it.

inline bool near_zero(const RationalFunction& s, double /*tol*/) { return s.is_zero(); }
inline bool near_zero(const SampledJet& s, double tol) { return s.is_zero(tol); }

/// Zero for certain, with no derivative information lost by skipping it.
inline bool structurally_zero(const RationalFunction& s) { return s.is_zero(); }
inline bool structurally_zero(const SampledJet& s) { return s.is_constant() && s.constant_value() == 0.0; }

/// Pivot preference: 2 for a nonzero constant, 1 for a nonzero field, 0 for zero.
inline int pivot_class(const RationalFunction& s, double /*tol*/) {
  if (s.is_zero()) return 0;
  return s.is_constant() ? 2 : 1;
}
inline int pivot_class(const SampledJet& s, double tol) {
  if (s.min_magnitude() <= tol) return 0;
  return s.looks_constant(tol) ? 2 : 1;
}

/// Secondary pivot key; only the float backend uses magnitudes.
inline double pivot_strength(const RationalFunction&) { return 0.0; }
inline double pivot_strength(const SampledJet& s) { return s.min_magnitude(); }

/// Residual size for reports: 0 for exact zero, otherwise the largest sampled |value|.
inline double magnitude(const RationalFunction& s) {
  if (s.is_zero()) return 0.0;
  if (s.is_constant()) return std::abs(s.constant_value().get_d());
  return std::numeric_limits<double>::infinity();
}
inline double magnitude(const SampledJet& s) { return s.magnitude(); }

inline std::size_t worst_point(const RationalFunction&) { return 0; }
inline std::size_t worst_point(const SampledJet& s) { return s.worst_point(); }

inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string render(const RationalFunction& s, const std::vector<std::string>& vars, std::size_t = 0) {
  return to_string(s, vars);
}
inline std::string render(const SampledJet& s, const std::vector<std::string>&, std::size_t point = 0) {
  return format_double(s.value(s.is_constant() ? 0 : point));
}

/// Value at a sample point, as a double.
inline double sample_value(const RationalFunction& s, const std::vector<Q>& point) {
  return s.evaluate(point).get_d();
}
inline double sample_value(const SampledJet& s, std::size_t point) { return s.value(s.is_constant() ? 0 : point); }

/// Whether s vanishes at any supplied sample point (exact evaluation).
inline bool vanishes_somewhere(const RationalFunction& s, const std::vector<std::vector<Q>>& points) {
  if (s.is_zero()) return true;
  if (s.is_constant()) return false;
  for (const auto& p : points) {
    if (s.denominator().evaluate(p) == 0) return true;
    if (s.numerator().evaluate(p) == 0) return true;
  }
  return false;
}

}  // namespace cpgeo
