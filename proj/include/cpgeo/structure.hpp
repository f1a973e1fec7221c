#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "cpgeo/check_result.hpp"
#include "cpgeo/exterior.hpp"

namespace cpgeo {

class InvalidContactPair : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class VolumeStatus { global_exact, sample_verified };

inline std::string to_string(VolumeStatus v) { return v == VolumeStatus::global_exact ? "global_exact" : "sample_verified"; }

template <class S>
struct ContactPair {
  DiffForm<S> alpha1, alpha2;
  DiffForm<S> dalpha1, dalpha2;
  std::size_t h = 0, k = 0;
  VolumeStatus volume = VolumeStatus::global_exact;
  S volume_coefficient;  // value of the volume form on (e_1, ..., e_n)
};

namespace detail {

template <class S>
bool vanishes_on_samples(const S& s, const std::vector<std::vector<Q>>& points, double tol) {
  if constexpr (is_exact_v<S>) {
    return vanishes_somewhere(s, points);
  } else {
    return s.min_magnitude() <= tol;
  }
}

}  // namespace detail

/// Checks the contact-pair axioms of type (h, k): dimension 2h+2k+2, the
/// volume form a1 ^ (da1)^h ^ a2 ^ (da2)^k, and (da1)^{h+1} = (da2)^{k+1} = 0.
template <class S>
ContactPair<S> validate_contact_pair(const FramedPatch<S>& P, const DiffForm<S>& a1, const DiffForm<S>& a2, std::size_t h, std::size_t k,
                                     double tol = 1e-9) {
  const std::size_t n = P.dim();
  if (a1.degree() != 1 || a2.degree() != 1) throw InvalidContactPair("contact pair forms must be 1-forms");
  if (a1.dim() != n || a2.dim() != n) throw InvalidContactPair("contact pair forms do not live on this patch");
  if (2 * h + 2 * k + 2 != n)
    throw InvalidContactPair("type (" + std::to_string(h) + "," + std::to_string(k) + ") needs dimension " + std::to_string(2 * h + 2 * k + 2) +
                             ", patch has dimension " + std::to_string(n));
  ContactPair<S> cp;
  cp.alpha1 = a1;
  cp.alpha2 = a2;
  cp.h = h;
  cp.k = k;
  cp.dalpha1 = ext_d(P, a1);
  cp.dalpha2 = ext_d(P, a2);
  const auto p1 = wedge_power(cp.dalpha1, unsigned(h));
  const auto p2 = wedge_power(cp.dalpha2, unsigned(k));
  const auto vol = wedge(wedge(wedge(a1, p1), a2), p2);
  cp.volume_coefficient = vol.get((std::uint32_t(1) << n) - 1u);
  if (near_zero(cp.volume_coefficient, tol)) {
    std::string msg = "volume form identically zero";
    if (p1.is_zero(tol)) msg += ": (da1)^" + std::to_string(h) + " = 0";
    else if (p2.is_zero(tol)) msg += ": (da2)^" + std::to_string(k) + " = 0";
    throw InvalidContactPair(msg);
  }
  if (is_constant(cp.volume_coefficient)) {
    cp.volume = VolumeStatus::global_exact;
  } else {
    if (detail::vanishes_on_samples(cp.volume_coefficient, P.sample_points(), tol)) throw InvalidContactPair("volume form vanishes at a sample point");
    cp.volume = VolumeStatus::sample_verified;
  }
  if (!wedge(p1, cp.dalpha1).is_zero(tol)) throw InvalidContactPair("(da1)^" + std::to_string(h + 1) + " is not zero");
  if (!wedge(p2, cp.dalpha2).is_zero(tol)) throw InvalidContactPair("(da2)^" + std::to_string(k + 1) + " is not zero");
  return cp;
}

template <class S>
struct ReebFields {
  Vec<S> Z1, Z2;
  bool commute = true;  // [Z1, Z2] = 0
};

/// Unique solution of a_i(Z_j) = delta_ij, i_{Z_j} da_i = 0, solved over the scalar field.
template <class S>
ReebFields<S> solve_reeb(const FramedPatch<S>& P, const ContactPair<S>& cp, double tol = 1e-9) {
  const std::size_t n = P.dim();
  Matrix<S> M(2 + 2 * n, n);
  Matrix<S> B(2 + 2 * n, 2);
  const auto D1 = cp.dalpha1.matrix(), D2 = cp.dalpha2.matrix();
  for (std::size_t a = 0; a < n; ++a) {
    M(0, a) = cp.alpha1.get(1u << a);
    M(1, a) = cp.alpha2.get(1u << a);
    for (std::size_t m = 0; m < n; ++m) {
      M(2 + m, a) = D1(a, m);
      M(2 + n + m, a) = D2(a, m);
    }
  }
  B(0, 0) = S(1);
  B(1, 1) = S(1);
  Matrix<S> X;
  try {
    X = solve(M, B, tol);
  } catch (const SingularSystem& e) {
    throw InvalidContactPair(std::string("Reeb system has no unique solution: ") + e.what());
  }
  ReebFields<S> r{X.col(0), X.col(1), true};
  r.commute = all_near_zero(P.bracket(r.Z1, r.Z2), tol);
  return r;
}

/// Bases of TG1, TG2, the vertical bundle V and the characteristic bundles
/// TF1 = TG1 + R Z2, TF2 = TG2 + R Z1.
template <class S>
struct Splittings {
  std::vector<Vec<S>> G1, G2, V, F1, F2;
  std::vector<Vec<S>> horizontal() const {
    auto h = G1;
    h.insert(h.end(), G2.begin(), G2.end());
    return h;
  }
};

template <class S>
Splittings<S> splittings(const FramedPatch<S>& P, const ContactPair<S>& cp, const ReebFields<S>& reeb, double tol = 1e-9) {
  const std::size_t n = P.dim();
  auto horizontal_kernel = [&](const DiffForm<S>& d) {
    Matrix<S> M(2 + n, n);
    const auto D = d.matrix();
    for (std::size_t a = 0; a < n; ++a) {
      M(0, a) = cp.alpha1.get(1u << a);
      M(1, a) = cp.alpha2.get(1u << a);
      for (std::size_t m = 0; m < n; ++m) M(2 + m, a) = D(a, m);
    }
    return kernel(M, tol);
  };
  Splittings<S> s;
  s.G1 = horizontal_kernel(cp.dalpha1);
  s.G2 = horizontal_kernel(cp.dalpha2);
  if (s.G1.size() != 2 * cp.k)
    throw InvalidContactPair("dim TG1 = " + std::to_string(s.G1.size()) + ", expected " + std::to_string(2 * cp.k));
  if (s.G2.size() != 2 * cp.h)
    throw InvalidContactPair("dim TG2 = " + std::to_string(s.G2.size()) + ", expected " + std::to_string(2 * cp.h));
  s.V = {reeb.Z1, reeb.Z2};
  s.F1 = s.G1;
  s.F1.push_back(reeb.Z2);
  s.F2 = s.G2;
  s.F2.push_back(reeb.Z1);
  auto all = s.F1;
  all.insert(all.end(), s.F2.begin(), s.F2.end());
  if (rank(Matrix<S>::from_columns(all, n), tol) != n) throw InvalidContactPair("TF1 and TF2 do not span the tangent space");
  return s;
}

/// A contact pair with its Reeb fields, splittings and (optionally) phi.
template <class S>
struct ContactPairStructure {
  FramedPatch<S> patch;
  ContactPair<S> pair;
  ReebFields<S> reeb;
  Splittings<S> split;
  std::optional<Endo<S>> phi;

  std::size_t dim() const { return patch.dim(); }
  Vec<S> Z() const { return reeb.Z1 + reeb.Z2; }
  const Endo<S>& phi_or_throw() const {
    if (!phi) throw std::logic_error("structure has no phi");
    return *phi;
  }
  S alpha(int i, const Vec<S>& X) const { return (i == 1 ? pair.alpha1 : pair.alpha2)(X); }
  const DiffForm<S>& dalpha(int i) const { return i == 1 ? pair.dalpha1 : pair.dalpha2; }
  const Vec<S>& reeb_field(int i) const { return i == 1 ? reeb.Z1 : reeb.Z2; }
  Frame frame() const { return {patch.vars(), patch.is_lie() ? std::vector<std::vector<Q>>{} : patch.sample_points()}; }
};

template <class S>
ContactPairStructure<S> build_structure(FramedPatch<S> P, const DiffForm<S>& a1, const DiffForm<S>& a2, std::size_t h, std::size_t k,
                                        std::type_identity_t<std::optional<Endo<S>>> phi = std::nullopt, double tol = 1e-9) {
  auto cp = validate_contact_pair(P, a1, a2, h, k, tol);
  auto reeb = solve_reeb(P, cp, tol);
  auto split = splittings(P, cp, reeb, tol);
  if (phi && (phi->rows() != P.dim() || phi->cols() != P.dim())) throw std::invalid_argument("phi must be n x n");
  return ContactPairStructure<S>{std::move(P), std::move(cp), std::move(reeb), std::move(split), std::move(phi)};
}

/// phi^2 = -Id + a1 (x) Z1 + a2 (x) Z2, phi Z_i = 0, a_i o phi = 0, rank phi = n - 2.
template <class S>
CheckResult validate_phi(const ContactPairStructure<S>& st, double tol = 1e-9) {
  const auto& phi = st.phi_or_throw();
  const std::size_t n = st.dim();
  const auto name = [&](std::size_t a) { return st.patch.frame_name(a); };
  Tally<S> all("PHI_STRUCTURE", st.frame(), tol);
  {
    Tally<S> t("phi_squared", st.frame(), tol);
    const auto phi2 = phi * phi;
    for (std::size_t j = 0; j < n; ++j) {
      Vec<S> rhs = -unit_vec<S>(n, j);
      const Vec<S> ej = unit_vec<S>(n, j);
      rhs = rhs + scale(st.alpha(1, ej), st.reeb.Z1) + scale(st.alpha(2, ej), st.reeb.Z2);
      t.compare_vec(phi2.col(j), rhs, {name(j)});
    }
    all.add_sub(t.finish());
  }
  {
    Tally<S> t("phi_reeb", st.frame(), tol);
    t.compare_vec(phi * st.reeb.Z1, zero_vec<S>(n), {"Z1"});
    t.compare_vec(phi * st.reeb.Z2, zero_vec<S>(n), {"Z2"});
    all.add_sub(t.finish());
  }
  {
    Tally<S> t("alpha_phi", st.frame(), tol);
    for (std::size_t j = 0; j < n; ++j) {
      const Vec<S> pj = phi.col(j);
      t.expect_zero(st.alpha(1, pj), {name(j)}, "alpha1(phi X)");
      t.expect_zero(st.alpha(2, pj), {name(j)}, "alpha2(phi X)");
    }
    all.add_sub(t.finish());
  }
  {
    CheckResult r;
    r.id = "rank";
    const std::size_t rk = rank(phi, tol);
    r.value = std::to_string(rk);
    if (rk == n - 2) {
      r.status = is_exact_v<S> ? Status::holds_exact : Status::holds_within_tol;
    } else {
      r.status = Status::fails;
      Witness w;
      w.lhs = std::to_string(rk);
      w.rhs = std::to_string(n - 2);
      w.note = "rank of phi";
      r.witness = w;
    }
    all.add_sub(r);
  }
  return all.finish();
}

/// phi(TF_i) in TF_i for i = 1, 2.
template <class S>
bool is_decomposable(const ContactPairStructure<S>& st, double tol = 1e-9) {
  const auto& phi = st.phi_or_throw();
  for (const auto* F : {&st.split.F1, &st.split.F2}) {
    std::vector<Vec<S>> images;
    for (const auto& v : *F) images.push_back(phi * v);
    if (!in_span(*F, images, st.dim(), tol)) return false;
  }
  return true;
}

template <class S>
struct NormalityReport {
  std::vector<std::vector<Vec<S>>> N1;   // N1[a][b] = N1(e_a, e_b)
  std::vector<Matrix<S>> N2;             // N2[i](a, b) = N2_{i+1}(e_a, e_b)
  bool is_normal = true;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  bool n2_vanish = true;
};

/// (L_V a)(Y) = V(a(Y)) - a([V, Y]).
template <class S>
S lie_derivative_one_form(const FramedPatch<S>& P, const Vec<S>& V, const DiffForm<S>& a, const Vec<S>& Y) {
  return P.apply(V, a(Y)) - a(P.bracket(V, Y));
}

template <class S>
Vec<S> n1_value(const ContactPairStructure<S>& st, const Vec<S>& X, const Vec<S>& Y) {
  const auto& phi = st.phi_or_throw();
  Vec<S> v = nijenhuis(st.patch, phi, X, Y);
  const S two(2);
  return v + scale(two * st.pair.dalpha1(X, Y), st.reeb.Z1) + scale(two * st.pair.dalpha2(X, Y), st.reeb.Z2);
}

template <class S>
S n2_value(const ContactPairStructure<S>& st, int i, const Vec<S>& X, const Vec<S>& Y) {
  const auto& phi = st.phi_or_throw();
  const auto& a = i == 1 ? st.pair.alpha1 : st.pair.alpha2;
  return lie_derivative_one_form(st.patch, phi * X, a, Y) - lie_derivative_one_form(st.patch, phi * Y, a, X);
}

template <class S>
NormalityReport<S> normality_tensors(const ContactPairStructure<S>& st, double tol = 1e-9) {
  const std::size_t n = st.dim();
  NormalityReport<S> r;
  r.N1.assign(n, std::vector<Vec<S>>(n, zero_vec<S>(n)));
  r.N2.assign(2, Matrix<S>(n, n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto ea = unit_vec<S>(n, a), eb = unit_vec<S>(n, b);
      r.N1[a][b] = n1_value(st, ea, eb);
      r.N1[b][a] = -r.N1[a][b];
      if (r.is_normal && !all_near_zero(r.N1[a][b], tol)) {
        r.is_normal = false;
        r.witness = {a, b};
      }
      for (int i = 1; i <= 2; ++i) {
        const S v = n2_value(st, i, ea, eb);
        r.N2[i - 1](a, b) = v;
        r.N2[i - 1](b, a) = -v;
        if (!near_zero(v, tol)) r.n2_vanish = false;
      }
    }
  return r;
}

template <class S>
struct HTensors {
  Endo<S> h, H1, H2;  // h = 1/2 L_Z phi, H_i = 1/2 L_{Z_i} phi
  std::optional<Endo<S>> h1, h2, phi1, phi2, P1, P2;  // block parts (decomposable phi only)
};

/// Projections onto TF1 along TF2 and onto TF2 along TF1.
template <class S>
std::pair<Endo<S>, Endo<S>> foliation_projections(const ContactPairStructure<S>& st, double tol = 1e-9) {
  const std::size_t n = st.dim();
  auto cols = st.split.F1;
  cols.insert(cols.end(), st.split.F2.begin(), st.split.F2.end());
  const auto B = Matrix<S>::from_columns(cols, n);
  const auto Binv = inverse(B, tol);
  Endo<S> D1(n, n), D2(n, n);
  for (std::size_t i = 0; i < st.split.F1.size(); ++i) D1(i, i) = S(1);
  for (std::size_t i = st.split.F1.size(); i < n; ++i) D2(i, i) = S(1);
  return {B * D1 * Binv, B * D2 * Binv};
}

template <class S>
HTensors<S> h_tensors(const ContactPairStructure<S>& st, bool need_blocks = true, double tol = 1e-9) {
  const auto& phi = st.phi_or_throw();
  const S half = S(1) / S(2);
  HTensors<S> r;
  r.H1 = lie_derivative_endo(st.patch, st.reeb.Z1, phi).scaled(half);
  r.H2 = lie_derivative_endo(st.patch, st.reeb.Z2, phi).scaled(half);
  r.h = lie_derivative_endo(st.patch, st.Z(), phi).scaled(half);
  if (need_blocks) {
    if (!is_decomposable(st, tol)) throw std::logic_error("h1, h2 need a decomposable phi");
    auto [P1, P2] = foliation_projections(st, tol);
    r.h1 = r.h * P2;
    r.h2 = r.h * P1;
    r.phi1 = phi * P2;
    r.phi2 = phi * P1;
    r.P1 = P1;
    r.P2 = P2;
  }
  return r;
}

}  // namespace cpgeo
