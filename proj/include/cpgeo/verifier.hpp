#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpgeo/riemann.hpp"

namespace cpgeo {

enum class Suite { core, curvature, classification, all };

inline Suite parse_suite(const std::string& s) {
  if (s == "core") return Suite::core;
  if (s == "curvature") return Suite::curvature;
  if (s == "classification") return Suite::classification;
  if (s == "all") return Suite::all;
  throw std::invalid_argument("unknown suite '" + s + "' (expected core, curvature, classification or all)");
}

inline std::string to_string(Suite s) {
  switch (s) {
    case Suite::core: return "core";
    case Suite::curvature: return "curvature";
    case Suite::classification: return "classification";
    case Suite::all: return "all";
  }
  return "?";
}

enum class Needs { nothing, compatible, associated, mcp, vertical_flat };

struct CheckInfo {
  std::string id;
  Needs needs;
  std::vector<Suite> suites;
  std::string statement;
};

/// The check registry, sorted by id.
inline const std::vector<CheckInfo>& check_registry() {
  using enum Suite;
  static const std::vector<CheckInfo> reg = [] {
    std::vector<CheckInfo> r = {
        {"ASSOCIATED", Needs::nothing, {core}, "g(X, phi Y) = (da1 + da2)(X, Y) and g(X, Z_i) = a_i(X)"},
        {"COMPATIBLE", Needs::nothing, {core}, "g(phi X, phi Y) = g(X, Y) - a1(X)a1(Y) - a2(X)a2(Y)"},
        {"COR_AB", Needs::vertical_flat, {curvature, classification}, "g((nabla_{hX} phi)Y, W) = 0 for horizontal X, Y, W"},
        {"CURV_EQ6", Needs::mcp, {curvature}, "(nabla_Z h)X = phi X - h^2 phi X - phi R_{XZ}Z"},
        {"CURV_EQ7", Needs::mcp, {curvature}, "1/2 (R_{ZX}Z - phi R_{Z phi X}Z) = phi^2 X + h^2 X"},
        {"CURV_SYMMETRIES", Needs::nothing, {curvature}, "R_{XY} = -R_{YX}, first Bianchi, g(R_{XY}W, V) = -g(R_{XY}V, W)"},
        {"DECOMPOSABLE", Needs::nothing, {core}, "phi(TF_i) in TF_i"},
        {"EQ11", Needs::vertical_flat, {classification}, "(nabla_X phi)Y = 2 g(X, Y) Z_j on the +1 eigenspaces of h"},
        {"FOLIATION_MIN", Needs::mcp, {core}, "TF1 and TF2 are orthogonal with minimal leaves"},
        {"H_ANTICOMMUTE", Needs::mcp, {core}, "h phi + phi h = 0 and h_i phi_i + phi_i h_i = 0"},
        {"H_HORIZONTAL", Needs::mcp, {core}, "a_i o h = a_i o h_j = 0"},
        {"H_SYMMETRIC", Needs::mcp, {core}, "L_{Z_1} phi, L_{Z_2} phi, h, h1, h2 are g-symmetric"},
        {"H_TRACELESS", Needs::mcp, {core}, "tr h = tr h1 = tr h2 = 0"},
        {"HOR_STAR", Needs::mcp, {core}, "g((nabla_X phi)W, phi Y) = g((nabla_X phi)phi W, Y) for horizontal X, Y, W"},
        {"HOR_TRIPLE", Needs::mcp, {core}, "g((nabla_X phi)Y, W) + g((nabla_{phi X} phi)phi Y, W) = 0 for horizontal X, Y, W"},
        {"KILLING_SEC", Needs::mcp, {curvature}, "Z Killing iff K(Z, X) = 1/2 for horizontal X; then R_{YZ}Z = Y - a1(Y)Z1 - a2(Y)Z2"},
        {"LEMMA_AB", Needs::mcp, {core}, "A(X,Y,W) + B(X,Y,W) - B(X,W,Y) = -2 g((nabla_{hX} phi)Y, W) for horizontal X, Y, W"},
        {"LEMMA_KERNELS", Needs::associated, {core}, "a_i(nabla_X Z_j) = 0"},
        {"LEVI_CIVITA", Needs::nothing, {core}, "nabla g = 0 and nabla is torsion free"},
        {"N2_VANISH", Needs::mcp, {core}, "N2_1 = N2_2 = 0"},
        {"NABLA_PHI_GENERAL", Needs::compatible, {core}, "2g((nabla_X phi)Y, W) for a compatible metric, including the dPhi and N2 terms"},
        {"NABLA_PHI_MCP", Needs::mcp, {core}, "2g((nabla_X phi)Y, W) = g(N1(Y, W), phi X) + 2 sum (da_i(phi Y, X)a_i(W) - da_i(phi W, X)a_i(Y))"},
        {"NABLA_PHI_REEB", Needs::mcp, {core}, "nabla_{Z_1} phi = nabla_{Z_2} phi = 0"},
        {"NABLA_Z", Needs::mcp, {core}, "nabla_X Z = -phi X - phi h X"},
        {"PHI_STRUCTURE", Needs::nothing, {core}, "phi^2 = -Id + a1 (x) Z1 + a2 (x) Z2, phi Z_i = 0, a_i o phi = 0, rank n - 2"},
        {"REEB_COMMUTE", Needs::nothing, {core}, "[Z1, Z2] = 0"},
        {"REEB_GEODESIC", Needs::compatible, {core}, "nabla_{Z_i} Z_j = 0 (Reeb orbits are totally geodesic)"},
        {"RIC_Z", Needs::mcp, {curvature}, "Ric(Z) = h + k - 1/2 tr h^2"},
    };
    std::sort(r.begin(), r.end(), [](const CheckInfo& a, const CheckInfo& b) { return a.id < b.id; });
    return r;
  }();
  return reg;
}

inline const CheckInfo* find_check(const std::string& id) {
  for (const auto& c : check_registry())
    if (c.id == id) return &c;
  return nullptr;
}

inline bool in_suite(const CheckInfo& c, Suite s) {
  return s == Suite::all || std::find(c.suites.begin(), c.suites.end(), s) != c.suites.end();
}

class UnknownCheck : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Human-readable name of a vector field: a frame name, or a combination of frame fields.
template <class S>
std::string describe(const FramedPatch<S>& P, const Vec<S>& v) {
  std::string out;
  std::size_t nonzero = 0, last = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!structurally_zero(v[i])) {
      ++nonzero;
      last = i;
    }
  if (nonzero == 0) return "0";
  if constexpr (is_exact_v<S>) {
    if (nonzero == 1 && v[last] == Exact(1)) return P.frame_name(last);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_zero()) continue;
      std::string c = render(v[i], P.vars());
      std::string term;
      if (c == "1") term = P.frame_name(i);
      else if (c == "-1") term = "-" + P.frame_name(i);
      else if (c.find_first_of("+- ", 1) != std::string::npos) term = "(" + c + ")*" + P.frame_name(i);
      else term = c + "*" + P.frame_name(i);
      if (out.empty()) out = term;
      else if (term[0] == '-') out += " - " + term.substr(1);
      else out += " + " + term;
    }
    return out;
  } else {
    if (nonzero == 1 && v[last].is_constant() && v[last].constant_value() == 1.0) return P.frame_name(last);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (structurally_zero(v[i])) continue;
      if (!out.empty()) out += " + ";
      out += render(v[i], P.vars(), 0) + "*" + P.frame_name(i);
    }
    return out;
  }
}

/// Runs registry checks for one structure and metric, caching derived tensors.
template <class S>
class Verifier {
 public:
  Verifier(const ContactPairStructure<S>& st, Metric<S> g, double tol = is_exact_v<S> ? 0.0 : 1e-7)
      : st_(st), g_(std::move(g)), tol_(tol), n_(st.dim()) {
    st_.phi_or_throw();
    check_metric(st_.patch, g_, lin_tol());
  }

  const ContactPairStructure<S>& structure() const { return st_; }
  const Metric<S>& metric() const { return g_; }
  double tol() const { return tol_; }

  // cached pieces
  const Connection<S>& connection() {
    if (!conn_) conn_.emplace(st_.patch, g_, lin_tol());
    return *conn_;
  }
  const Curvature<S>& curvature() {
    if (!curv_) curv_.emplace(connection());
    return *curv_;
  }
  const NormalityReport<S>& normality() {
    if (!norm_) norm_ = normality_tensors(st_, lin_tol());
    return *norm_;
  }
  const HTensors<S>& h() {
    if (!h_) h_ = h_tensors(st_, decomposable(), lin_tol());
    return *h_;
  }
  const std::vector<Endo<S>>& nabla_phi() {
    if (!dphi_) dphi_ = connection().nabla_endo(st_.phi_or_throw());
    return *dphi_;
  }
  bool phi_valid() {
    if (!phi_ok_) phi_ok_ = validate_phi(st_, tol_).passed();
    return *phi_ok_;
  }
  bool compatible() {
    if (!compat_) compat_ = phi_valid() && check_compatible(st_, g_, tol_).passed();
    return *compat_;
  }
  bool associated() {
    if (!assoc_) assoc_ = phi_valid() && check_associated(st_, g_, tol_).passed();
    return *assoc_;
  }
  bool decomposable() {
    if (!decomp_) decomp_ = is_decomposable(st_, lin_tol());
    return *decomp_;
  }
  /// R_{XY} Z_i = 0 for all frame X, Y; the first violation is recorded.
  CheckResult vertical_flat() {
    Tally<S> t("VERTICAL_FLAT", st_.frame(), tol_);
    const auto& R = curvature();
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a + 1; b < n_; ++b)
        for (int i = 1; i <= 2; ++i) {
          if (t.failed()) break;
          t.compare_vec(R.apply(e(a), e(b), st_.reeb_field(i)), zero_vec<S>(n_), {name(a), name(b), "Z" + std::to_string(i)}, "R_{XY}Z_i");
        }
    return t.finish();
  }
  bool is_vertical_flat() {
    if (!vflat_) vflat_ = vertical_flat().passed();
    return *vflat_;
  }

  /// Precondition failure reason, or empty when the check applies.
  std::string precondition(Needs needs) {
    switch (needs) {
      case Needs::nothing: return {};
      case Needs::compatible:
        if (!phi_valid()) return "phi is not a contact pair structure";
        if (!compatible()) return "g not compatible";
        return {};
      case Needs::associated:
        if (!phi_valid()) return "phi is not a contact pair structure";
        if (!associated()) return "g not associated";
        return {};
      case Needs::mcp:
      case Needs::vertical_flat:
        if (!phi_valid()) return "phi is not a contact pair structure";
        if (!associated()) return "g not associated";
        if (!decomposable()) return "phi not decomposable";
        if (needs == Needs::vertical_flat && !is_vertical_flat()) return "curvature does not vanish on the vertical subbundle";
        return {};
    }
    return {};
  }

  CheckResult run(const std::string& id) {
    const CheckInfo* info = find_check(id);
    if (!info) throw UnknownCheck("unknown check id '" + id + "'");
    if (auto why = precondition(info->needs); !why.empty()) return CheckResult::not_applicable(id, why);
    CheckResult r = dispatch(id);
    r.id = id;
    return r;
  }

  std::vector<CheckResult> run_suite(Suite s) {
    std::vector<CheckResult> out;
    for (const auto& c : check_registry())
      if (in_suite(c, s)) out.push_back(run(c.id));
    return out;
  }

  // individual checks

  CheckResult check_levi_civita() {
    const auto& C = connection();
    Tally<S> all("LEVI_CIVITA", st_.frame(), tol_);
    Tally<S> mc("metric_compatible", st_.frame(), tol_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = j; k < n_; ++k) {
          const S v = st_.patch.derive(i, g_(j, k)) - inner(g_, C.nabla_frame(i, j), e(k)) - inner(g_, e(j), C.nabla_frame(i, k));
          mc.expect_zero(v, {name(i), name(j), name(k)}, "(nabla g)");
        }
    all.add_sub(mc.finish());
    Tally<S> tf("torsion_free", st_.frame(), tol_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        tf.compare_vec(C.nabla_frame(i, j) - C.nabla_frame(j, i), st_.patch.bracket_frame(i, j), {name(i), name(j)}, "torsion");
    all.add_sub(tf.finish());
    return all.finish();
  }

  CheckResult check_curvature_symmetries() {
    const auto& R = curvature();
    Tally<S> all("CURV_SYMMETRIES", st_.frame(), tol_);
    Tally<S> anti("antisymmetry", st_.frame(), tol_), bianchi("first_bianchi", st_.frame(), tol_), metric("metric_antisymmetry", st_.frame(), tol_),
        pair("pair_symmetry", st_.frame(), tol_);
    std::vector<S> lowered(n_ * n_ * n_ * n_, S(0));  // g(R_{ij} e_k, e_l)
    auto low = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) -> S& { return lowered[((i * n_ + j) * n_ + k) * n_ + l]; };
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k)
          for (std::size_t l = 0; l < n_; ++l) {
            S v(0);
            for (std::size_t m = 0; m < n_; ++m)
              if (!structurally_zero(R(m, i, j, k)) && !structurally_zero(g_(m, l))) v += R(m, i, j, k) * g_(m, l);
            low(i, j, k, l) = v;
          }
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k)
          for (std::size_t l = 0; l < n_; ++l) {
            const std::vector<std::string> args{name(i), name(j), name(k), name(l)};
            anti.expect_zero(R(l, i, j, k) + R(l, j, i, k), args);
            bianchi.expect_zero(R(l, i, j, k) + R(l, j, k, i) + R(l, k, i, j), args);
            metric.expect_zero(low(i, j, k, l) + low(i, j, l, k), args);
            pair.compare(low(i, j, k, l), low(k, l, i, j), args);
          }
    all.add_sub(anti.finish());
    all.add_sub(bianchi.finish());
    all.add_sub(metric.finish());
    all.add_sub(pair.finish());
    return all.finish();
  }

  CheckResult check_n2() {
    const auto& N = normality();
    Tally<S> t("N2_VANISH", st_.frame(), tol_);
    for (int i = 0; i < 2; ++i)
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = a + 1; b < n_; ++b) t.expect_zero(N.N2[i](a, b), {name(a), name(b)}, "N2_" + std::to_string(i + 1));
    return t.finish();
  }

  CheckResult check_reeb_geodesic() {
    const auto& C = connection();
    Tally<S> t("REEB_GEODESIC", st_.frame(), tol_);
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j)
        t.compare_vec(C.nabla(st_.reeb_field(i), st_.reeb_field(j)), zero_vec<S>(n_), {"Z" + std::to_string(i), "Z" + std::to_string(j)},
                      "nabla_{Z_i} Z_j");
    return t.finish();
  }

  /// Right-hand side pieces shared by the two covariant-derivative formulas.
  S eq4_rhs(std::size_t a, std::size_t b, std::size_t c) {
    const auto& phi = st_.phi_or_throw();
    const auto& N = normality();
    const Vec<S> pb = phi.col(b), pc = phi.col(c);
    S v = inner(g_, N.N1[b][c], phi.col(a));
    for (int i = 1; i <= 2; ++i) {
      const auto& d = st_.dalpha(i);
      v += S(2) * (d(pb, e(a)) * st_.alpha(i, e(c)) - d(pc, e(a)) * st_.alpha(i, e(b)));
    }
    return v;
  }

  CheckResult check_nabla_phi_general() {
    const auto& phi = st_.phi_or_throw();
    const auto& D = nabla_phi();
    const auto& N = normality();
    const auto Phi = fundamental_two_form(g_, phi);
    const auto dPhi = ext_d(st_.patch, Phi);
    Tally<S> t("NABLA_PHI_GENERAL", st_.frame(), tol_);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        for (std::size_t c = 0; c < n_; ++c) {
          const S lhs = S(2) * inner(g_, D[a].col(b), e(c));
          S rhs = S(3) * dPhi(std::vector<Vec<S>>{e(a), e(b), e(c)}) - S(3) * dPhi(std::vector<Vec<S>>{e(a), phi.col(b), phi.col(c)}) + eq4_rhs(a, b, c);
          for (int i = 1; i <= 2; ++i) rhs += st_.alpha(i, e(a)) * N.N2[i - 1](b, c);
          t.compare(lhs, rhs, {name(a), name(b), name(c)}, "2g((nabla_X phi)Y, W)");
        }
    return t.finish();
  }

  CheckResult check_nabla_phi_mcp() {
    const auto& D = nabla_phi();
    Tally<S> t("NABLA_PHI_MCP", st_.frame(), tol_);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        for (std::size_t c = 0; c < n_; ++c)
          t.compare(S(2) * inner(g_, D[a].col(b), e(c)), eq4_rhs(a, b, c), {name(a), name(b), name(c)}, "2g((nabla_X phi)Y, W)");
    return t.finish();
  }

  CheckResult check_nabla_phi_reeb() {
    const auto& D = nabla_phi();
    Tally<S> t("NABLA_PHI_REEB", st_.frame(), tol_);
    for (int i = 1; i <= 2; ++i) {
      const auto M = along(D, st_.reeb_field(i));
      for (std::size_t j = 0; j < n_; ++j) t.compare_vec(M.col(j), zero_vec<S>(n_), {"Z" + std::to_string(i), name(j)}, "(nabla_{Z_i} phi)Y");
    }
    return t.finish();
  }

  CheckResult check_h_symmetric() {
    const auto& H = h();
    Tally<S> all("H_SYMMETRIC", st_.frame(), tol_);
    const S two(2);
    const std::vector<std::pair<std::string, Endo<S>>> ops = {
        {"L_{Z1} phi", H.H1.scaled(two)}, {"L_{Z2} phi", H.H2.scaled(two)}, {"h", H.h}, {"h1", *H.h1}, {"h2", *H.h2}};
    for (const auto& [label, T] : ops) {
      Tally<S> t(label, st_.frame(), tol_);
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = a + 1; b < n_; ++b) t.compare(inner(g_, T.col(a), e(b)), inner(g_, e(a), T.col(b)), {name(a), name(b)}, label);
      all.add_sub(t.finish());
    }
    return all.finish();
  }

  CheckResult check_nabla_z() {
    const auto& phi = st_.phi_or_throw();
    const auto& H = h();
    const auto& C = connection();
    const Vec<S> Z = st_.Z();
    Tally<S> t("NABLA_Z", st_.frame(), tol_);
    for (std::size_t a = 0; a < n_; ++a) {
      const Vec<S> rhs = -(phi.col(a) + phi * H.h.col(a));
      t.compare_vec(C.nabla(e(a), Z), rhs, {name(a)}, "nabla_X Z");
    }
    return t.finish();
  }

  CheckResult check_h_anticommute() {
    const auto& phi = st_.phi_or_throw();
    const auto& H = h();
    Tally<S> all("H_ANTICOMMUTE", st_.frame(), tol_);
    const std::vector<std::tuple<std::string, Endo<S>, Endo<S>>> pairs = {{"h phi + phi h", H.h, phi}, {"h1 phi1 + phi1 h1", *H.h1, *H.phi1},
                                                                          {"h2 phi2 + phi2 h2", *H.h2, *H.phi2}};
    for (const auto& [label, T, F] : pairs) {
      Tally<S> t(label, st_.frame(), tol_);
      const auto M = T * F + F * T;
      for (std::size_t j = 0; j < n_; ++j) t.compare_vec(M.col(j), zero_vec<S>(n_), {name(j)}, label);
      all.add_sub(t.finish());
    }
    return all.finish();
  }

  CheckResult check_h_traceless() {
    const auto& H = h();
    Tally<S> t("H_TRACELESS", st_.frame(), tol_);
    for (const auto& [label, T] : std::vector<std::pair<std::string, const Endo<S>*>>{{"tr h", &H.h}, {"tr h1", &*H.h1}, {"tr h2", &*H.h2}}) {
      S tr(0);
      for (std::size_t i = 0; i < n_; ++i) tr += (*T)(i, i);
      t.expect_zero(tr, {}, label);
    }
    return t.finish();
  }

  CheckResult check_h_horizontal() {
    const auto& H = h();
    Tally<S> t("H_HORIZONTAL", st_.frame(), tol_);
    for (const auto& [label, T] : std::vector<std::pair<std::string, const Endo<S>*>>{{"h", &H.h}, {"h1", &*H.h1}, {"h2", &*H.h2}})
      for (int i = 1; i <= 2; ++i)
        for (std::size_t a = 0; a < n_; ++a) t.expect_zero(st_.alpha(i, T->col(a)), {name(a)}, "alpha" + std::to_string(i) + " o " + label);
    return t.finish();
  }

  CheckResult check_lemma_kernels() {
    const auto& C = connection();
    Tally<S> t("LEMMA_KERNELS", st_.frame(), tol_);
    for (std::size_t a = 0; a < n_; ++a)
      for (int j = 1; j <= 2; ++j) {
        const Vec<S> v = C.nabla(e(a), st_.reeb_field(j));
        for (int i = 1; i <= 2; ++i)
          t.expect_zero(st_.alpha(i, v), {name(a), "Z" + std::to_string(j)}, "alpha" + std::to_string(i) + "(nabla_X Z" + std::to_string(j) + ")");
      }
    return t.finish();
  }

  CheckResult check_curv_eq6() {
    const auto& phi = st_.phi_or_throw();
    const auto& H = h();
    const auto& R = curvature();
    const auto Dh = connection().nabla_endo(H.h);
    const Vec<S> Z = st_.Z();
    const auto NZh = along(Dh, Z);
    const auto h2 = H.h * H.h;
    Tally<S> t("CURV_EQ6", st_.frame(), tol_);
    for (std::size_t a = 0; a < n_; ++a) {
      const Vec<S> pX = phi.col(a);
      const Vec<S> rhs = pX - h2 * pX - phi * R.apply(e(a), Z, Z);
      t.compare_vec(NZh.col(a), rhs, {name(a)}, "(nabla_Z h)X");
    }
    return t.finish();
  }

  CheckResult check_curv_eq7() {
    const auto& phi = st_.phi_or_throw();
    const auto& H = h();
    const auto& R = curvature();
    const Vec<S> Z = st_.Z();
    const auto rhs_op = phi * phi + H.h * H.h;
    const S half = S(1) / S(2);
    Tally<S> t("CURV_EQ7", st_.frame(), tol_);
    for (std::size_t a = 0; a < n_; ++a) {
      const Vec<S> lhs = scale(half, R.apply(Z, e(a), Z) - phi * R.apply(Z, phi.col(a), Z));
      t.compare_vec(lhs, rhs_op.col(a), {name(a)}, "1/2 (R_{ZX}Z - phi R_{Z phi X}Z)");
    }
    return t.finish();
  }

  S trace_h2() {
    const auto h2 = h().h * h().h;
    S tr(0);
    for (std::size_t i = 0; i < n_; ++i) tr += h2(i, i);
    return tr;
  }

  CheckResult check_ric_z() {
    const S ric = ric_direction(g_, curvature(), st_.Z(), lin_tol());
    const S expected = S(long(st_.pair.h + st_.pair.k)) - trace_h2() / S(2);
    Tally<S> t("RIC_Z", st_.frame(), tol_);
    t.compare(ric, expected, {"Z"}, "Ric(Z) = h + k - 1/2 tr h^2");
    auto r = t.finish();
    r.value = render(ric, st_.patch.vars());
    r.detail = "h + k - 1/2 tr h^2 = " + render(expected, st_.patch.vars());
    return r;
  }

  /// Horizontal test vectors: the TG1, TG2 basis and all pairwise sums, so
  /// that a quadratic form vanishing on them vanishes on the horizontal bundle.
  std::vector<std::pair<std::string, Vec<S>>> horizontal_probes() {
    const auto H = st_.split.horizontal();
    std::vector<std::pair<std::string, Vec<S>>> out;
    for (const auto& v : H) out.emplace_back(describe(st_.patch, v), v);
    for (std::size_t a = 0; a < H.size(); ++a)
      for (std::size_t b = a + 1; b < H.size(); ++b) out.emplace_back(describe(st_.patch, H[a] + H[b]), H[a] + H[b]);
    return out;
  }

  CheckResult check_killing_sec() {
    const auto& R = curvature();
    const Vec<S> Z = st_.Z();
    CheckResult r;
    r.id = "KILLING_SEC";
    const bool killing = is_killing(st_.patch, g_, Z, lin_tol());
    // 2K(Z, X) g(X, X) = -g(R_{ZX}Z, X) with |Z|^2 = 2; K = 1/2 iff q(X) = 0
    Tally<S> half("sectional_half", st_.frame(), tol_);
    std::optional<Witness> plane;
    for (const auto& [label, X] : horizontal_probes()) {
      const S lhs = -inner(g_, R.apply(Z, X, Z), X);
      const S xx = inner(g_, X, X);
      if (!half.compare(lhs, xx, {"Z", label}, "2K(Z,X) g(X,X) = -g(R_{ZX}Z, X) with K = 1/2") && !plane) {
        Witness w;
        w.args = {"Z", label};
        const S K = lhs / (S(2) * xx);
        w.lhs = "K = " + render(K, st_.patch.vars());
        w.rhs = "1/2";
        w.residual = magnitude(K - S(1) / S(2));
        w.note = "plane through Z with K != 1/2";
        if constexpr (!is_exact_v<S>) w.point = worst_point(K - S(1) / S(2));
        plane = w;
      }
    }
    auto half_r = half.finish();
    const bool all_half = half_r.passed();
    Tally<S> all("KILLING_SEC", st_.frame(), tol_);
    auto directed = [&](const std::string& id, bool premise, bool conclusion) {
      CheckResult d;
      d.id = id;
      if (!premise || conclusion) {
        d.status = is_exact_v<S> ? Status::holds_exact : Status::holds_within_tol;
        d.detail = premise ? "premise and conclusion hold" : "premise false";
      } else {
        d.status = Status::fails;
        Witness w;
        w.note = id;
        if (plane && id == "killing_implies_half") w = *plane;
        w.lhs = premise ? "premise holds" : "";
        w.rhs = "conclusion fails";
        d.witness = w;
      }
      return d;
    };
    all.add_sub(directed("killing_implies_half", killing, all_half));
    all.add_sub(directed("half_implies_killing", all_half, killing));
    half_r.id = "sectional_half";
    if (killing) {
      // R_{YZ}Z = Y - a1(Y)Z1 - a2(Y)Z2
      Tally<S> t("tanno", st_.frame(), tol_);
      for (std::size_t a = 0; a < n_; ++a) {
        const Vec<S> rhs = e(a) - scale(st_.alpha(1, e(a)), st_.reeb.Z1) - scale(st_.alpha(2, e(a)), st_.reeb.Z2);
        t.compare_vec(R.apply(e(a), Z, Z), rhs, {name(a)}, "R_{YZ}Z");
      }
      all.add_sub(t.finish());
    }
    r = all.finish();
    r.id = "KILLING_SEC";
    r.subchecks.push_back(std::move(half_r));
    r.value = killing ? "Z Killing; K(Z, X) = 1/2 for all horizontal X" : "Z not Killing";
    if (plane) {
      r.detail = "K(" + plane->args[0] + ", " + plane->args[1] + "): " + plane->lhs;
      if (r.passed()) r.witness = plane;
    }
    return r;
  }

  std::vector<Vec<S>> horizontal() { return st_.split.horizontal(); }

  template <class F>
  CheckResult horizontal_triples(const std::string& id, F&& f) {
    const auto H = horizontal();
    Tally<S> t(id, st_.frame(), tol_);
    for (std::size_t a = 0; a < H.size(); ++a)
      for (std::size_t b = 0; b < H.size(); ++b)
        for (std::size_t c = 0; c < H.size(); ++c) {
          auto [lhs, rhs] = f(H[a], H[b], H[c]);
          t.compare(lhs, rhs, {describe(st_.patch, H[a]), describe(st_.patch, H[b]), describe(st_.patch, H[c])});
        }
    return t.finish();
  }

  CheckResult check_hor_star() {
    const auto& phi = st_.phi_or_throw();
    const auto& D = nabla_phi();
    return horizontal_triples("HOR_STAR", [&](const Vec<S>& X, const Vec<S>& Y, const Vec<S>& W) {
      const auto NX = along(D, X);
      return std::pair{inner(g_, NX * W, phi * Y), inner(g_, NX * (phi * W), Y)};
    });
  }

  CheckResult check_hor_triple() {
    const auto& phi = st_.phi_or_throw();
    const auto& D = nabla_phi();
    return horizontal_triples("HOR_TRIPLE", [&](const Vec<S>& X, const Vec<S>& Y, const Vec<S>& W) {
      return std::pair{inner(g_, along(D, X) * Y, W) + inner(g_, along(D, phi * X) * (phi * Y), W), S(0)};
    });
  }

  CheckResult check_lemma_ab() {
    const auto& H = h();
    ABTensors<S> ab(connection(), g_, st_.phi_or_throw(), H.h);
    const auto& D = ab.nabla_phi();
    return horizontal_triples("LEMMA_AB", [&](const Vec<S>& X, const Vec<S>& Y, const Vec<S>& W) {
      return std::pair{ab.combination(X, Y, W), S(-2) * inner(g_, along(D, H.h * X) * Y, W)};
    });
  }

  CheckResult check_cor_ab() {
    const auto& H = h();
    const auto& D = nabla_phi();
    return horizontal_triples("COR_AB", [&](const Vec<S>& X, const Vec<S>& Y, const Vec<S>& W) {
      return std::pair{inner(g_, along(D, H.h * X) * Y, W), S(0)};
    });
  }

  CheckResult check_foliation_min() {
    const auto& C = connection();
    Tally<S> all("FOLIATION_MIN", st_.frame(), tol_);
    Tally<S> orth("orthogonal", st_.frame(), tol_);
    for (const auto& X : st_.split.F1)
      for (const auto& Y : st_.split.F2) orth.expect_zero(inner(g_, X, Y), {describe(st_.patch, X), describe(st_.patch, Y)}, "g(TF1, TF2)");
    all.add_sub(orth.finish());
    for (int i = 1; i <= 2; ++i) {
      const auto& F = i == 1 ? st_.split.F1 : st_.split.F2;
      Tally<S> t("minimal_F" + std::to_string(i), st_.frame(), tol_);
      t.compare_vec(mean_curvature(C, g_, F, lin_tol()), zero_vec<S>(n_), {"TF" + std::to_string(i)}, "mean curvature");
      all.add_sub(t.finish());
    }
    return all.finish();
  }

  /// Eigenspace of an endomorphism for eigenvalue lambda, by exact kernel.
  std::vector<Vec<S>> eigenspace(const Endo<S>& T, long lambda) {
    return kernel(T - Endo<S>::identity(n_).scaled(S(lambda)), lin_tol());
  }

  CheckResult check_eq11() {
    const auto& H = h();
    const auto& D = nabla_phi();
    Tally<S> t("EQ11", st_.frame(), tol_);
    for (int j = 1; j <= 2; ++j) {
      const auto plus = eigenspace(j == 1 ? *H.h1 : *H.h2, 1);
      for (const auto& X : plus)
        for (const auto& Y : plus)
          t.compare_vec(along(D, X) * Y, scale(S(2) * inner(g_, X, Y), st_.reeb_field(j)),
                        {describe(st_.patch, X), describe(st_.patch, Y)}, "(nabla_X phi)Y = 2g(X,Y)Z" + std::to_string(j) + " on [+1]_" + std::to_string(j));
    }
    return t.finish();
  }

  CheckResult check_decomposable() {
    const auto& phi = st_.phi_or_throw();
    CheckResult r;
    r.id = "DECOMPOSABLE";
    r.status = is_exact_v<S> ? Status::holds_exact : Status::holds_within_tol;
    for (int i = 1; i <= 2; ++i) {
      const auto& F = i == 1 ? st_.split.F1 : st_.split.F2;
      for (const auto& v : F)
        if (!in_span(F, {phi * v}, n_, lin_tol())) {
          r.status = Status::fails;
          Witness w;
          w.args = {describe(st_.patch, v)};
          w.lhs = "phi X = " + describe(st_.patch, phi * v);
          w.rhs = "TF" + std::to_string(i);
          w.note = "phi X leaves TF" + std::to_string(i);
          r.witness = w;
          return r;
        }
    }
    return r;
  }

  CheckResult check_reeb_commute() {
    Tally<S> t("REEB_COMMUTE", st_.frame(), tol_);
    t.compare_vec(st_.patch.bracket(st_.reeb.Z1, st_.reeb.Z2), zero_vec<S>(n_), {"Z1", "Z2"}, "[Z1, Z2]");
    return t.finish();
  }

 private:
  double lin_tol() const { return is_exact_v<S> ? 1e-9 : std::max(tol_, 1e-12); }
  Vec<S> e(std::size_t a) const { return unit_vec<S>(n_, a); }
  std::string name(std::size_t a) const { return st_.patch.frame_name(a); }

  CheckResult dispatch(const std::string& id) {
    static const std::map<std::string, CheckResult (Verifier::*)()> table = {
        {"ASSOCIATED", &Verifier::run_associated},
        {"COMPATIBLE", &Verifier::run_compatible},
        {"COR_AB", &Verifier::check_cor_ab},
        {"CURV_EQ6", &Verifier::check_curv_eq6},
        {"CURV_EQ7", &Verifier::check_curv_eq7},
        {"CURV_SYMMETRIES", &Verifier::check_curvature_symmetries},
        {"DECOMPOSABLE", &Verifier::check_decomposable},
        {"EQ11", &Verifier::check_eq11},
        {"FOLIATION_MIN", &Verifier::check_foliation_min},
        {"H_ANTICOMMUTE", &Verifier::check_h_anticommute},
        {"H_HORIZONTAL", &Verifier::check_h_horizontal},
        {"H_SYMMETRIC", &Verifier::check_h_symmetric},
        {"H_TRACELESS", &Verifier::check_h_traceless},
        {"HOR_STAR", &Verifier::check_hor_star},
        {"HOR_TRIPLE", &Verifier::check_hor_triple},
        {"KILLING_SEC", &Verifier::check_killing_sec},
        {"LEMMA_AB", &Verifier::check_lemma_ab},
        {"LEMMA_KERNELS", &Verifier::check_lemma_kernels},
        {"LEVI_CIVITA", &Verifier::check_levi_civita},
        {"N2_VANISH", &Verifier::check_n2},
        {"NABLA_PHI_GENERAL", &Verifier::check_nabla_phi_general},
        {"NABLA_PHI_MCP", &Verifier::check_nabla_phi_mcp},
        {"NABLA_PHI_REEB", &Verifier::check_nabla_phi_reeb},
        {"NABLA_Z", &Verifier::check_nabla_z},
        {"PHI_STRUCTURE", &Verifier::run_phi_structure},
        {"REEB_COMMUTE", &Verifier::check_reeb_commute},
        {"REEB_GEODESIC", &Verifier::check_reeb_geodesic},
        {"RIC_Z", &Verifier::check_ric_z},
    };
    return (this->*table.at(id))();
  }

  CheckResult run_associated() { return check_associated(st_, g_, tol_); }
  CheckResult run_compatible() { return check_compatible(st_, g_, tol_); }
  CheckResult run_phi_structure() { return validate_phi(st_, tol_); }

  const ContactPairStructure<S>& st_;
  Metric<S> g_;
  double tol_;
  std::size_t n_;
  std::optional<Connection<S>> conn_;
  std::optional<Curvature<S>> curv_;
  std::optional<NormalityReport<S>> norm_;
  std::optional<HTensors<S>> h_;
  std::optional<std::vector<Endo<S>>> dphi_;
  std::optional<bool> phi_ok_, compat_, assoc_, decomp_, vflat_;
};

/// True when every applicable check passed.
inline bool suite_passed(const std::vector<CheckResult>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CheckResult& r) { return !r.applicable() || r.passed(); });
}

}  // namespace cpgeo
