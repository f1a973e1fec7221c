// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "fixtures.hpp"
#include "oracle.hpp"

using namespace cpgeo;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) note << "failed: ";
      else note << "; ";
      note << what;
      ok = false;
    }
  }
};

const CheckResult* find(const std::vector<CheckResult>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.id == id) return &r;
  return nullptr;
}

bool exact(const CheckResult& r) { return r.status == Status::holds_exact; }

Q rational(const Exact& s) { return s.is_constant() ? s.constant_value() : Q(999999); }

Vec<Exact> from_oracle(const oracle::V& v) {
  Vec<Exact> out;
  for (const auto& x : v) out.push_back(Exact(x));
  return out;
}

struct Built {
  Manifest m;
  ContactPairStructure<Exact> st;
};

Built build(Manifest m) {
  auto st = build_structure(m);
  return {std::move(m), std::move(st)};
}

void criterion1(Outcome& o) {
  auto b = build(nilpotent6());
  o.expect(b.st.pair.h == 1 && b.st.pair.k == 1, "type (1,1)");
  o.expect(b.st.pair.volume == VolumeStatus::global_exact, "volume form constant");
  o.expect(exact(validate_phi(b.st)), "validate_phi holds_exact");
  o.expect(is_decomposable(b.st), "phi decomposable");
  const auto a = check_associated(b.st, *b.m.metric);
  o.expect(exact(a), "check_associated holds_exact (" + to_string(a.status) + ")");
  // dw1 = w3 ^ w4 under the 1/2 conventions gives [e3, e4] = -e1
  o.expect(b.st.patch.bracket_frame(2, 3) == -unit_vec<Exact>(6, 0), "[e3,e4] = -e1");
  if (o.ok) o.note << "nilpotent6: type (1,1) contact pair, phi valid and decomposable, g associated, all exact";
}

void criterion2(Outcome& o) {
  struct Want {
    Manifest m;
    long ric;
    long trh2;
  };
  for (auto& w : std::vector<Want>{{nilpotent6(), 2, 0}, {heisenberg_vaisman(1), 1, 0}, {flat_e2r(), 0, 2}}) {
    auto b = build(w.m);
    Verifier<Exact> v(b.st, *b.m.metric);
    const Exact ric = ric_direction(*b.m.metric, v.curvature(), b.st.Z());
    const Exact tr = v.trace_h2();
    o.expect(ric == Exact(w.ric), b.m.name + ": Ric(Z) = " + to_string(ric) + ", expected " + std::to_string(w.ric));
    o.expect(tr == Exact(w.trh2), b.m.name + ": tr h^2 = " + to_string(tr) + ", expected " + std::to_string(w.trh2));
    o.expect(exact(v.run("RIC_Z")), b.m.name + ": RIC_Z holds_exact");
    // the oracle's Ricci in the direction of Z
    const auto og = b.m.name == "nilpotent6" ? oracle::nilpotent6(true) : b.m.name == "flat_e2r" ? oracle::e2_line() : oracle::heisenberg_line();
    oracle::V z;
    for (const auto& c : b.st.Z()) z.push_back(rational(c));
    o.expect(og.ric(z, z) / og.g(z, z) == Q(w.ric), b.m.name + ": oracle Ric(Z)");
  }
  if (o.ok) o.note << "Ric(Z) = 2, 1, 0 exactly on nilpotent6, heisenberg_vaisman, flat_e2r (tr h^2 = 0, 0, 2)";
}

void criterion3(Outcome& o) {
  {
    auto b = build(nilpotent6());
    Verifier<Exact> v(b.st, *b.m.metric);
    o.expect(is_killing(b.st.patch, *b.m.metric, b.st.Z()), "nilpotent6: Z Killing");
    const auto r = v.run("KILLING_SEC");
    o.expect(exact(r), "nilpotent6: KILLING_SEC holds_exact");
    o.expect(r.value && *r.value == "Z Killing; K(Z, X) = 1/2 for all horizontal X", "nilpotent6: value");
    const auto half = find(r.subchecks, "sectional_half"), tanno = find(r.subchecks, "tanno");
    o.expect(half && exact(*half), "nilpotent6: K = 1/2 on every probe plane");
    o.expect(tanno && exact(*tanno), "nilpotent6: R_{YZ}Z = Y - a1(Y)Z1 - a2(Y)Z2 on all frame Y");
  }
  {
    auto b = build(flat_e2r());
    Verifier<Exact> v(b.st, *b.m.metric);
    o.expect(!is_killing(b.st.patch, *b.m.metric, b.st.Z()), "flat_e2r: Z not Killing");
    const auto r = v.run("KILLING_SEC");
    o.expect(r.passed(), "flat_e2r: biconditional holds");
    o.expect(r.witness.has_value(), "flat_e2r: witness plane");
    if (r.witness) {
      o.expect(r.witness->lhs != "K = 1/2", "flat_e2r: witness K != 1/2");
      if (o.ok) o.note << "nilpotent6 Killing with K = 1/2 and Tanno identity exact; flat_e2r not Killing, witness " << r.detail;
    }
  }
}

void criterion4(Outcome& o) {
  const std::vector<std::string> ids = {"NABLA_PHI_GENERAL", "NABLA_PHI_MCP", "NABLA_PHI_REEB", "H_SYMMETRIC", "NABLA_Z", "H_ANTICOMMUTE",
                                        "H_TRACELESS",       "H_HORIZONTAL",  "LEMMA_KERNELS",  "CURV_EQ6",    "CURV_EQ7", "HOR_STAR",
                                        "HOR_TRIPLE",        "LEMMA_AB",      "FOLIATION_MIN",  "REEB_GEODESIC", "N2_VANISH"};
  for (auto m : {nilpotent6(), heisenberg_vaisman(1)}) {
    auto b = build(m);
    Verifier<Exact> v(b.st, *b.m.metric);
    for (const auto& id : ids) {
      const auto r = v.run(id);
      o.expect(exact(r), b.m.name + ": " + id + " " + to_string(r.status));
    }
  }
  auto b = build(nilpotent6());
  const auto& g = *b.m.metric;
  const Connection<Exact> C(b.st.patch, g);
  const auto e = [](std::size_t i) { return unit_vec<Exact>(6, i); };
  const auto sigma = second_fundamental_form(C, g, b.st.split.F2, e(2), e(3));
  o.expect(sigma == scale(Exact(Q(1, 2)), e(4)), "sigma(e3,e4) = 1/2 e5, got " + describe(b.st.patch, sigma));
  // oracle: normal part of nabla_{e3} e4 against span(e1, e3, e4) for the diagonal metric
  const auto og = oracle::nilpotent6(true);
  auto on = og.nabla(og.e(3), og.e(4));
  on[0] = on[2] = on[3] = 0;
  o.expect(sigma == from_oracle(on), "sigma(e3,e4) agrees with the oracle");
  o.expect(all_near_zero(mean_curvature(C, g, b.st.split.F1), 0.0), "mean curvature of F1 = 0");
  o.expect(all_near_zero(mean_curvature(C, g, b.st.split.F2), 0.0), "mean curvature of F2 = 0");
  if (o.ok) o.note << ids.size() << " identities holds_exact on nilpotent6 and heisenberg_vaisman; sigma(e3,e4) = 1/2 e5, mean curvature 0";
}

void criterion5(Outcome& o) {
  auto b = build(nilpotent6_compatible());
  Verifier<Exact> v(b.st, *b.m.metric);
  o.expect(exact(v.run("COMPATIBLE")), "COMPATIBLE holds_exact");
  const auto a = v.run("ASSOCIATED");
  o.expect(a.status == Status::fails, "ASSOCIATED fails");
  o.expect(a.witness && a.witness->args == std::vector<std::string>{"e3", "e4"} && a.witness->lhs == "1" && a.witness->rhs == "1/2",
           "witness g'(e3, phi e4) = 1 vs 1/2");
  // independent: g'(e3, phi e4) and (da1 + da2)(e3, e4)
  const auto& g = *b.m.metric;
  const Exact lhs = inner(g, unit_vec<Exact>(6, 2), b.st.phi->col(3));
  const Exact rhs = (b.st.pair.dalpha1 + b.st.pair.dalpha2).at({2, 3});
  o.expect(lhs == Exact(1) && rhs == Exact(Q(1, 2)), "direct evaluation 1 vs 1/2");
  o.expect(exact(v.run("NABLA_PHI_GENERAL")), "NABLA_PHI_GENERAL holds_exact for g'");
  if (o.ok) o.note << "g' compatible, not associated: g'(e3, phi e4) = 1 != 1/2; NABLA_PHI_GENERAL holds_exact";
}

void criterion6(Outcome& o) {
  {
    auto b = build(heisenberg_vaisman(1));
    Verifier<Exact> v(b.st, *b.m.metric);
    o.expect(v.normality().is_normal, "heisenberg_vaisman normal");
    bool h0 = true;
    for (std::size_t j = 0; j < b.st.dim(); ++j) h0 = h0 && all_near_zero(v.h().h.col(j), 0.0);
    o.expect(h0, "heisenberg_vaisman h = 0");
    const auto f = flatness_obstruction(v);
    o.expect(f.verdict == FlatVerdict::flat_impossible && f.certificate == "Ric(Z) = 1", "certificate Ric(Z) = 1, got " + f.certificate);
  }
  {
    auto b = build(nilpotent6());
    Verifier<Exact> v(b.st, *b.m.metric);
    const auto& N = v.normality();
    o.expect(!N.is_normal, "nilpotent6 not normal");
    const Vec<Exact> want = unit_vec<Exact>(6, 3) + unit_vec<Exact>(6, 5);
    o.expect(N.N1[2][4] == want, "N1(e3,e5) = e4 + e6, got " + describe(b.st.patch, N.N1[2][4]));
  }
  if (o.ok) o.note << "heisenberg_vaisman normal, h = 0, cannot be flat: Ric(Z) = 1; nilpotent6 N1(e3,e5) = e4 + e6";
}

void criterion7(Outcome& o) {
  {
    auto b = build(flat_e2r());
    Verifier<Exact> v(b.st, *b.m.metric);
    const auto c = classify_vertical_flat(v);
    o.expect(c.attempted, "flat_e2r classification attempted");
    std::vector<long> nonzero;
    for (const auto& [l, mult] : c.h_eigenvalues)
      if (l != 0) nonzero.push_back(l);
    o.expect(nonzero == std::vector<long>{-1, 1}, "eigenvalues {+1, -1}");
    o.expect(c.plus1.size() == 1 && c.minus1.size() == 1, "eigensplit dims (1,1)");
    for (const auto& r : c.checks) o.expect(exact(r), "flat_e2r " + r.id + " " + to_string(r.status));
    o.expect(c.model && *c.model == "E^2 x E^1 x E^1", "model E^2 x E^1 x E^1");
    const Curvature<Exact>& R = v.curvature();
    std::size_t zero = 0;
    for (std::size_t l = 0; l < 4; ++l)
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          for (std::size_t k = 0; k < 4; ++k) zero += R(l, i, j, k).is_zero();
    o.expect(zero == 256, "R = 0 on all 256 components (" + std::to_string(zero) + ")");
    o.expect(oracle::e2_line().flat(), "oracle flatness of flat_e2r");
  }
  {
    auto b = build(flat_e2r2());
    Verifier<Exact> v(b.st, *b.m.metric);
    const auto c = classify_vertical_flat(v);
    o.expect(c.model && *c.model == "E^2 x E^1 x E^2 x E^1", "flat_e2r2 type (1,1) model");
  }
  {
    auto b = build(nilpotent6());
    Verifier<Exact> v(b.st, *b.m.metric);
    const auto c = classify_vertical_flat(v);
    o.expect(c.hypothesis.status == Status::fails && c.hypothesis.witness, "nilpotent6 fails the hypothesis with a witness");
    if (c.hypothesis.witness && o.ok) {
      const auto& w = *c.hypothesis.witness;
      o.note << "flat_e2r model E^2 x E^1 x E^1, R = 0 on 256 components; flat_e2r2 E^2 x E^1 x E^2 x E^1; nilpotent6 witness R(";
      for (std::size_t i = 0; i < w.args.size(); ++i) o.note << (i ? ", " : "") << w.args[i];
      o.note << ") = " << w.lhs;
    }
  }
}

void criterion8(Outcome& o) {
  const auto m = darboux(1, 0);
  const auto st = build_structure(m);
  const auto model = build_associated_metric(st);
  const std::size_t np = st.patch.sample_points().size();
  o.expect(np == 25, "25 sample points (" + std::to_string(np) + ")");
  // independent residual from hand data: a1 = dz - y dx, a2 = dt, da1(d/dx, d/dy) = 1/2
  double worst = 0;
  for (std::size_t p = 0; p < np; ++p) {
    const double y = st.patch.sample_points()[p][1].get_d();
    const double a1[4] = {-y, 0, 1, 0}, a2[4] = {0, 0, 0, 1};
    double D[4][4] = {};
    D[0][1] = 0.5;
    D[1][0] = -0.5;
    auto val = [&](const Float& f) { return f.value(f.is_constant() ? 0 : p); };
    const auto& G = *model.g;
    const auto& F = *model.st.phi;
    for (std::size_t a = 0; a < 4; ++a) {
      worst = std::max(worst, std::abs(val(G(a, 2)) - a1[a]));
      worst = std::max(worst, std::abs(val(G(a, 3)) - a2[a]));
      for (std::size_t b = 0; b < 4; ++b) {
        double s = 0;
        for (std::size_t c = 0; c < 4; ++c) s += val(G(a, c)) * val(F(c, b));
        worst = std::max(worst, std::abs(s - D[a][b]));
      }
    }
  }
  o.expect(worst < 1e-9, "associated residual " + format_double(worst));
  o.expect(is_decomposable(model.st), "phi decomposable");
  Verifier<Float> v(model.st, *model.g);
  const auto rs = v.run_suite(Suite::core);
  double max_res = 0;
  for (const auto& r : rs) {
    o.expect(r.passed(), "core " + r.id + " " + to_string(r.status));
    max_res = std::max(max_res, r.residual);
  }
  o.expect(max_res < 1e-7, "core residual " + format_double(max_res));
  if (o.ok) o.note << "darboux(1,0): associated residual " << format_double(worst) << " over " << np << " points; core suite max residual "
                   << format_double(max_res);
}

void criterion9(Outcome& o) {
  std::mt19937 rng(2024);
  const auto C = fixtures::chart4();
  std::size_t dd = 0, cartan = 0;
  for (int t = 0; t < 50; ++t) {
    const auto w = fixtures::random_form(rng, 4, std::size_t(t % 3));
    dd += ext_d(C, ext_d(C, w)).is_zero();
  }
  for (int t = 0; t < 25; ++t) {
    const std::size_t p = std::size_t(t % 4);
    const auto w = fixtures::random_form(rng, 4, p);
    const auto X = fixtures::random_vec(rng, 4);
    DiffForm<Exact> rhs = Exact(long(p + 1)) * interior(X, ext_d(C, w));
    if (p > 0) rhs = rhs + Exact(long(p)) * ext_d(C, interior(X, w));
    cartan += (lie_derivative(C, X, w) - rhs).is_zero();
  }
  o.expect(dd == 50, "d o d = 0 on " + std::to_string(dd) + "/50");
  o.expect(cartan == 25, "Cartan formula on " + std::to_string(cartan) + "/25");
  std::size_t frames = 0;
  for (const auto& info : list_examples()) {
    const auto P = build_patch(build_example(info.name));
    bool ok = true;
    for (std::size_t i = 0; i < P.dim(); ++i)
      for (std::size_t j = i + 1; j < P.dim(); ++j)
        for (std::size_t k = j + 1; k < P.dim(); ++k) ok = ok && all_near_zero(P.jacobiator(i, j, k), 0.0);
    o.expect(ok, "Jacobi on " + info.name);
    ++frames;
  }
  const auto mc = fixtures::metric_chart();
  o.expect(fixtures::levi_civita_violations(mc.patch, mc.g) == 0, "Levi-Civita identities on a non-constant metric");
  for (const auto& m : fixtures::lie_catalog())
    o.expect(fixtures::levi_civita_violations(build_patch(m), *m.metric) == 0, "Levi-Civita identities on " + m.name);
  if (o.ok) o.note << "d o d = 0 (50), Cartan (25), Jacobi on " << frames << " catalog frames, nabla g = 0, torsion-free, curvature symmetries, Bianchi";
}

}  // namespace

int main() {
  struct Criterion {
    int n;
    const char* title;
    double budget;  // seconds, 0 when none is stated
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> all = {
      {1, "convention calibration", 1, criterion1},         {2, "Ricci formula", 5, criterion2},
      {3, "Killing/sectional biconditional", 5, criterion3}, {4, "identity suite", 30, criterion4},
      {5, "compatible vs associated", 0, criterion5},        {6, "normality and flatness obstruction", 0, criterion6},
      {7, "classification diagnostics", 10, criterion7},     {8, "polarization", 0, criterion8},
      {9, "property suites", 30, criterion9},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0) o.expect(secs < c.budget, "runtime " + format_double(secs) + " s over budget " + format_double(c.budget) + " s");
    failed += !o.ok;
    std::printf("%s criterion %d (%s) [%.2f s]: %s\n", o.ok ? "PASS" : "FAIL", c.n, c.title, secs, o.note.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", int(all.size()) - failed, all.size());
  return failed ? 1 : 0;
}
