#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpgeo/verifier.hpp"

namespace cpgeo {

template <class S>
struct ClassificationReport {
  CheckResult hypothesis;  // R_{XY} Z_i = 0
  bool attempted = false;
  std::string reason;  // why no classification was attempted
  std::map<long, std::size_t> h_eigenvalues;  // eigenvalue -> multiplicity
  std::vector<Vec<S>> plus1, minus1, plus2, minus2;  // [+1]_1, [-1]_1, [+1]_2, [-1]_2
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, std::string>> plus1_sectional;  // plane -> K
  std::optional<std::string> model;

  bool passed() const { return model.has_value(); }
};

/// Model space named by the local splitting for type (h, k).
inline std::string classification_model(std::size_t h, std::size_t k) {
  auto block = [](std::size_t m) {
    if (m == 1) return std::string("E^2 x E^1");
    return "E^" + std::to_string(m + 1) + " x S^" + std::to_string(m) + "(4)";
  };
  std::string s = block(h);
  s += k == 0 ? " x E^1" : " x " + block(k);
  return s;
}

namespace detail {

template <class S>
std::vector<Vec<S>> concat(std::initializer_list<const std::vector<Vec<S>>*> parts) {
  std::vector<Vec<S>> out;
  for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

}  // namespace detail

template <class S>
class Classifier {
 public:
  explicit Classifier(Verifier<S>& v) : v_(v), st_(v.structure()), g_(v.metric()), n_(st_.dim()), tol_(v.tol()) {}

  ClassificationReport<S> run() {
    ClassificationReport<S> r;
    if (auto why = v_.precondition(Needs::mcp); !why.empty()) {
      r.reason = why;
      r.hypothesis = CheckResult::not_applicable("VERTICAL_FLAT", why);
      return r;
    }
    if (st_.pair.h < 1) {
      r.reason = "type (h, k) needs h >= 1";
      r.hypothesis = CheckResult::not_applicable("VERTICAL_FLAT", r.reason);
      return r;
    }
    r.hypothesis = v_.vertical_flat();
    if (!r.hypothesis.passed()) {
      r.reason = "curvature does not vanish on the vertical subbundle";
      return r;
    }
    r.attempted = true;
    const auto& H = v_.h();
    const auto& phi = st_.phi_or_throw();

    {
      Tally<S> t("H_SQUARED", st_.frame(), tol_);
      const auto lhs = H.h * H.h, rhs = (phi * phi).scaled(S(-1));
      for (std::size_t a = 0; a < n_; ++a) t.compare_vec(lhs.col(a), rhs.col(a), {name(a)}, "h^2 X = -phi^2 X");
      r.checks.push_back(t.finish());
    }

    r.plus1 = v_.eigenspace(*H.h1, 1);
    r.minus1 = v_.eigenspace(*H.h1, -1);
    r.plus2 = v_.eigenspace(*H.h2, 1);
    r.minus2 = v_.eigenspace(*H.h2, -1);
    const auto plus = detail::concat<S>({&r.plus1, &r.plus2});
    const auto minus = detail::concat<S>({&r.minus1, &r.minus2});
    const std::size_t zero = n_ - plus.size() - minus.size();
    if (!plus.empty()) r.h_eigenvalues[1] = plus.size();
    if (!minus.empty()) r.h_eigenvalues[-1] = minus.size();
    if (zero) r.h_eigenvalues[0] = zero;

    {
      CheckResult c;
      c.id = "EIGEN_DIMS";
      const std::size_t h = st_.pair.h, k = st_.pair.k;
      const bool ok = r.plus1.size() + r.minus1.size() == 2 * h && r.plus2.size() + r.minus2.size() == 2 * k &&
                      r.plus1.size() == r.minus1.size() && r.plus2.size() == r.minus2.size() &&
                      v_.eigenspace(H.h, 1).size() == plus.size() && v_.eigenspace(H.h, -1).size() == minus.size();
      c.status = ok ? exact_or_tol() : Status::fails;
      c.value = "[+1]_1: " + std::to_string(r.plus1.size()) + ", [-1]_1: " + std::to_string(r.minus1.size()) +
                ", [+1]_2: " + std::to_string(r.plus2.size()) + ", [-1]_2: " + std::to_string(r.minus2.size());
      if (!ok) {
        Witness w;
        w.lhs = *c.value;
        w.rhs = "2h = " + std::to_string(2 * h) + ", 2k = " + std::to_string(2 * k);
        w.note = "eigenspace dimensions";
        c.witness = w;
      }
      r.checks.push_back(c);
    }

    const auto& Z1 = st_.reeb.Z1;
    const auto& Z2 = st_.reeb.Z2;
    const std::vector<Vec<S>> z1{Z1}, z2{Z2}, V{Z1, Z2};

    {
      Tally<S> t("BRACKET_RELATIONS", st_.frame(), tol_);
      // phi[X, Y] in [+1] for X, Y in [-1]; same blockwise; [X, Z_i] in [-1]
      bracket_into(t, minus, plus, true, "phi[X,Y] in [+1]");
      bracket_into(t, r.minus1, r.plus1, true, "phi[X,Y] in [+1]_1");
      bracket_into(t, r.minus2, r.plus2, true, "phi[X,Y] in [+1]_2");
      for (const auto& X : minus)
        for (int i = 1; i <= 2; ++i)
          member(t, minus, st_.patch.bracket(X, st_.reeb_field(i)), {describe(st_.patch, X), "Z" + std::to_string(i)}, "[X, Z_i] in [-1]");
      r.checks.push_back(t.finish());
    }

    const std::vector<std::pair<std::string, std::vector<Vec<S>>>> minus_families = {
        {"[-1]_1", r.minus1},
        {"[-1]_2", r.minus2},
        {"[-1]", minus},
        {"[-1]_1 + Z1", detail::concat<S>({&r.minus1, &z1})},
        {"[-1]_1 + Z2", detail::concat<S>({&r.minus1, &z2})},
        {"[-1]_2 + Z1", detail::concat<S>({&r.minus2, &z1})},
        {"[-1]_2 + Z2", detail::concat<S>({&r.minus2, &z2})},
        {"[-1] + Z1", detail::concat<S>({&minus, &z1})},
        {"[-1] + Z2", detail::concat<S>({&minus, &z2})},
        {"[-1]_1 + V", detail::concat<S>({&r.minus1, &V})},
        {"[-1]_2 + V", detail::concat<S>({&r.minus2, &V})},
        {"[-1] + V", detail::concat<S>({&minus, &V})},
    };
    {
      Tally<S> all("INTEGRABLE_MINUS", st_.frame(), tol_);
      for (const auto& [label, D] : minus_families) all.add_sub(integrable(label, D));
      r.checks.push_back(all.finish());
    }

    {
      Tally<S> t("NABLA_Z_MINUS", st_.frame(), tol_);
      const Vec<S> Z = st_.Z();
      for (const auto& X : minus) t.compare_vec(v_.connection().nabla(X, Z), zero_vec<S>(n_), {describe(st_.patch, X)}, "nabla_X Z");
      r.checks.push_back(t.finish());
    }

    const auto minusV = detail::concat<S>({&minus, &V});
    {
      Tally<S> all("MINUS_V_BLOCK", st_.frame(), tol_);
      all.add_sub(totally_geodesic("[-1] + V", minusV));
      all.add_sub(flat("[-1] + V", minusV));
      r.checks.push_back(all.finish());
    }

    {
      Tally<S> all("PLUS_BLOCKS", st_.frame(), tol_);
      all.add_sub(integrable("[+1]", plus));
      all.add_sub(totally_geodesic("[+1]", plus));
      all.add_sub(integrable("[+1]_1", r.plus1));
      all.add_sub(integrable("[+1]_2", r.plus2));
      all.add_sub(totally_geodesic("[+1]_1", r.plus1));
      all.add_sub(totally_geodesic("[+1]_2", r.plus2));
      r.checks.push_back(all.finish());
    }

    {
      Tally<S> t("PLUS_SECTIONAL", st_.frame(), tol_);
      for (const auto* B : {&r.plus1, &r.plus2}) {
        if (B->size() < 2) continue;
        for (std::size_t a = 0; a < B->size(); ++a)
          for (std::size_t b = a + 1; b < B->size(); ++b) {
            const S K = sectional(g_, v_.curvature(), (*B)[a], (*B)[b], lin_tol());
            const std::string plane = describe(st_.patch, (*B)[a]) + ", " + describe(st_.patch, (*B)[b]);
            r.plus1_sectional.emplace_back(plane, render(K, st_.patch.vars()));
            t.compare(K, S(4), {describe(st_.patch, (*B)[a]), describe(st_.patch, (*B)[b])}, "K = 4");
          }
      }
      r.checks.push_back(t.finish());
    }

    {
      auto eq11 = v_.check_eq11();
      r.checks.push_back(eq11);
    }

    bool all_ok = true;
    for (const auto& c : r.checks) all_ok &= c.passed();
    if (all_ok) r.model = classification_model(st_.pair.h, st_.pair.k);
    return r;
  }

 private:
  Status exact_or_tol() const { return is_exact_v<S> ? Status::holds_exact : Status::holds_within_tol; }
  double lin_tol() const { return is_exact_v<S> ? 1e-9 : std::max(tol_, 1e-12); }
  std::string name(std::size_t a) const { return st_.patch.frame_name(a); }

  /// Records whether v lies in span(D), using the g-normal part as residual.
  void member(Tally<S>& t, const std::vector<Vec<S>>& D, const Vec<S>& v, const std::vector<std::string>& args, const std::string& note) {
    t.compare_vec(normal_part(g_, D, v, lin_tol()), zero_vec<S>(n_), args, note);
  }

  void bracket_into(Tally<S>& t, const std::vector<Vec<S>>& from, const std::vector<Vec<S>>& into, bool apply_phi, const std::string& note) {
    const auto& phi = st_.phi_or_throw();
    for (std::size_t a = 0; a < from.size(); ++a)
      for (std::size_t b = a + 1; b < from.size(); ++b) {
        Vec<S> br = st_.patch.bracket(from[a], from[b]);
        if (apply_phi) br = phi * br;
        member(t, into, br, {describe(st_.patch, from[a]), describe(st_.patch, from[b])}, note);
      }
  }

  CheckResult integrable(const std::string& label, const std::vector<Vec<S>>& D) {
    Tally<S> t("integrable " + label, st_.frame(), tol_);
    for (std::size_t a = 0; a < D.size(); ++a)
      for (std::size_t b = a + 1; b < D.size(); ++b)
        member(t, D, st_.patch.bracket(D[a], D[b]), {describe(st_.patch, D[a]), describe(st_.patch, D[b])}, "[X, Y] in " + label);
    return t.finish();
  }

  CheckResult totally_geodesic(const std::string& label, const std::vector<Vec<S>>& D) {
    Tally<S> t("totally geodesic " + label, st_.frame(), tol_);
    for (const auto& X : D)
      for (const auto& Y : D)
        t.compare_vec(second_fundamental_form(v_.connection(), g_, D, X, Y, lin_tol()), zero_vec<S>(n_),
                      {describe(st_.patch, X), describe(st_.patch, Y)}, "sigma(X, Y)");
    return t.finish();
  }

  /// Intrinsic flatness of a totally geodesic block: g(R_{XY}W, U) = 0 inside it.
  CheckResult flat(const std::string& label, const std::vector<Vec<S>>& D) {
    Tally<S> t("flat " + label, st_.frame(), tol_);
    const auto& R = v_.curvature();
    for (std::size_t a = 0; a < D.size(); ++a)
      for (std::size_t b = a + 1; b < D.size(); ++b)
        for (std::size_t c = 0; c < D.size(); ++c) {
          const Vec<S> RW = R.apply(D[a], D[b], D[c]);
          for (std::size_t d = 0; d < D.size(); ++d)
            t.expect_zero(inner(g_, RW, D[d]),
                          {describe(st_.patch, D[a]), describe(st_.patch, D[b]), describe(st_.patch, D[c]), describe(st_.patch, D[d])},
                          "g(R_{XY}W, U)");
        }
    return t.finish();
  }

  Verifier<S>& v_;
  const ContactPairStructure<S>& st_;
  const Metric<S>& g_;
  std::size_t n_;
  double tol_;
};

template <class S>
ClassificationReport<S> classify_vertical_flat(Verifier<S>& v) {
  return Classifier<S>(v).run();
}

enum class FlatVerdict { flat_impossible, flat_confirmed, inconsistent, no_obstruction };

inline std::string to_string(FlatVerdict v) {
  switch (v) {
    case FlatVerdict::flat_impossible: return "flat_impossible";
    case FlatVerdict::flat_confirmed: return "flat_confirmed";
    case FlatVerdict::inconsistent: return "inconsistent";
    case FlatVerdict::no_obstruction: return "no_obstruction";
  }
  return "?";
}

struct FlatnessReport {
  FlatVerdict verdict = FlatVerdict::no_obstruction;
  bool normal = false;
  bool flat = false;
  std::string certificate;
  std::string message;
};

/// Obstructions to flatness of an associated metric. With `assert_flat` the
/// curvature is taken to vanish instead of being computed.
template <class S>
FlatnessReport flatness_obstruction(Verifier<S>& v, bool assert_flat = false) {
  FlatnessReport r;
  if (auto why = v.precondition(Needs::mcp); !why.empty()) throw std::invalid_argument("flatness_obstruction: " + why);
  const auto& st = v.structure();
  const std::size_t h = st.pair.h, k = st.pair.k;
  r.normal = v.normality().is_normal;
  const auto vars = st.patch.vars();
  if (assert_flat) {
    r.flat = true;
    if (h > 1 || k > 1) {
      r.verdict = FlatVerdict::inconsistent;
      r.message = "inconsistent: a flat associated metric needs h, k <= 1 (type (" + std::to_string(h) + ", " + std::to_string(k) + "))";
      return r;
    }
    if (r.normal) {
      r.verdict = FlatVerdict::inconsistent;
      r.message = "inconsistent: a normal metric contact pair cannot be flat";
      return r;
    }
  } else if (r.normal) {
    const S ric = ric_direction(v.metric(), v.curvature(), st.Z(), 1e-9);
    r.verdict = FlatVerdict::flat_impossible;
    r.certificate = "Ric(Z) = " + render(ric, vars);
    r.message = "normal, so g cannot be flat: " + r.certificate + " != 0";
    return r;
  } else {
    r.flat = v.curvature().is_zero(v.tol() > 0 ? v.tol() : 1e-9);
  }
  if (!r.flat) {
    r.message = "no obstruction from these criteria";
    return r;
  }
  const S tr = v.trace_h2();
  const S expected(long(2 * (h + k)));
  bool trace_ok;
  if constexpr (is_exact_v<S>) trace_ok = (tr - expected).is_zero();
  else trace_ok = magnitude(tr - expected) <= v.tol();
  r.certificate = "tr h^2 = " + render(tr, vars);
  if (h > 1 || k > 1 || !trace_ok) {
    r.verdict = FlatVerdict::inconsistent;
    r.message = "inconsistent: flat but " + std::string(h > 1 || k > 1 ? "h or k exceeds 1" : "tr h^2 != 2(h + k)");
    return r;
  }
  r.verdict = FlatVerdict::flat_confirmed;
  r.message = "flat with h = " + std::to_string(h) + ", k = " + std::to_string(k) + " <= 1 and " + r.certificate + " = 2(h + k)";
  return r;
}

}  // namespace cpgeo
