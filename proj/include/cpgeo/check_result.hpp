#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "cpgeo/linalg.hpp"

namespace cpgeo {

enum class Status { holds_exact, holds_within_tol, fails, not_applicable };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::holds_exact: return "holds_exact";
    case Status::holds_within_tol: return "holds_within_tol";
    case Status::fails: return "fails";
    case Status::not_applicable: return "not_applicable";
  }
  return "?";
}

/// Where an identity broke: the frame arguments, both sides, and for
/// sampled backends the sample point.
struct Witness {
  std::vector<std::string> args;
  std::string lhs, rhs;
  std::optional<std::size_t> point;
  std::vector<std::string> point_coords;
  double residual = 0.0;
  std::string note;
};

struct CheckResult {
  std::string id;
  Status status = Status::holds_exact;
  double residual = 0.0;
  std::optional<Witness> witness;
  std::string reason;  // not_applicable only
  std::optional<std::string> value;
  std::string detail;
  std::vector<CheckResult> subchecks;

  bool passed() const { return status == Status::holds_exact || status == Status::holds_within_tol; }
  bool applicable() const { return status != Status::not_applicable; }

  static CheckResult not_applicable(std::string id, std::string reason) {
    CheckResult r;
    r.id = std::move(id);
    r.status = Status::not_applicable;
    r.reason = std::move(reason);
    return r;
  }
};

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Exact>;

/// Rendering context for witnesses.
struct Frame {
  std::vector<std::string> vars;
  std::vector<std::vector<Q>> points;
};

inline std::vector<std::string> point_strings(const std::vector<Q>& p) {
  std::vector<std::string> out;
  for (const auto& q : p) out.push_back(to_string(q));
  return out;
}

/// Accumulates lhs = rhs comparisons into one CheckResult. Exact scalars must
/// cancel identically; sampled scalars must agree within `tol` at every point.
/// The first failing comparison becomes the witness.
template <class S>
class Tally {
 public:
  Tally(std::string id, Frame frame, double tol) : frame_(std::move(frame)), tol_(tol) { r_.id = std::move(id); }

  bool compare(const S& lhs, const S& rhs, std::vector<std::string> args, const std::string& note = {}) {
    const S diff = lhs - rhs;
    ++count_;
    if constexpr (is_exact_v<S>) {
      if (diff.is_zero()) return true;
      record_failure(lhs, rhs, diff, std::move(args), note, magnitude(diff));
      return false;
    } else {
      const double m = magnitude(diff);
      r_.residual = std::max(r_.residual, m);
      if (m <= tol_) return true;
      record_failure(lhs, rhs, diff, std::move(args), note, m);
      return false;
    }
  }

  bool compare_vec(const Vec<S>& lhs, const Vec<S>& rhs, const std::vector<std::string>& args, const std::string& note = {}) {
    bool ok = true;
    for (std::size_t k = 0; k < lhs.size(); ++k)
      ok &= compare(lhs[k], rhs[k], args, note.empty() ? "component " + std::to_string(k + 1) : note + ", component " + std::to_string(k + 1));
    return ok;
  }

  bool expect_zero(const S& v, std::vector<std::string> args, const std::string& note = {}) { return compare(v, S(0), std::move(args), note); }

  void add_sub(CheckResult sub) {
    if (!sub.passed() && sub.applicable() && !failed_) {
      failed_ = true;
      r_.witness = sub.witness;
      if (r_.witness && r_.witness->note.empty()) r_.witness->note = sub.id;
      else if (r_.witness) r_.witness->note = sub.id + ": " + r_.witness->note;
    }
    r_.residual = std::max(r_.residual, sub.residual);
    r_.subchecks.push_back(std::move(sub));
  }

  void fail(Witness w) {
    if (!failed_) r_.witness = std::move(w);
    failed_ = true;
  }

  bool failed() const { return failed_; }
  std::size_t count() const { return count_; }
  CheckResult& result() { return r_; }

  CheckResult finish() {
    if (failed_) r_.status = Status::fails;
    else r_.status = is_exact_v<S> ? Status::holds_exact : Status::holds_within_tol;
    if constexpr (is_exact_v<S>)
      if (!failed_) r_.residual = 0.0;
    return r_;
  }

 private:
  void record_failure(const S& lhs, const S& rhs, const S& diff, std::vector<std::string> args, const std::string& note, double m) {
    if (failed_) return;
    failed_ = true;
    Witness w;
    w.args = std::move(args);
    w.note = note;
    w.residual = m;
    if constexpr (is_exact_v<S>) {
      w.lhs = render(lhs, frame_.vars);
      w.rhs = render(rhs, frame_.vars);
      if (!diff.is_constant())
        for (std::size_t p = 0; p < frame_.points.size(); ++p)
          if (!frame_.points[p].empty() && diff.denominator().evaluate(frame_.points[p]) != 0 && diff.evaluate(frame_.points[p]) != 0) {
            w.point = p;
            w.point_coords = point_strings(frame_.points[p]);
            w.residual = std::abs(diff.evaluate(frame_.points[p]).get_d());
            break;
          }
    } else {
      const std::size_t p = worst_point(diff);
      w.point = p;
      if (p < frame_.points.size()) w.point_coords = point_strings(frame_.points[p]);
      w.lhs = render(lhs, frame_.vars, p);
      w.rhs = render(rhs, frame_.vars, p);
    }
    r_.witness = std::move(w);
    r_.residual = std::max(r_.residual, m);
  }

  CheckResult r_;
  Frame frame_;
  double tol_;
  std::size_t count_ = 0;
  bool failed_ = false;
};

}  // namespace cpgeo
