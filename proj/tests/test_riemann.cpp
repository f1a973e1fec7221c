#include <gtest/gtest.h>

#include "cpgeo/cpgeo.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace cpgeo;

namespace {

Vec<Exact> to_vec(const oracle::V& v) {
  Vec<Exact> out;
  for (const auto& x : v) out.push_back(Exact(x));
  return out;
}

Q q_of(const Exact& s) { return s.constant_value(); }

struct Case {
  const char* name;
  Manifest m;
  oracle::LieGeometry o;
};

std::vector<Case> oracle_cases() {
  return {{"nilpotent6", nilpotent6(), oracle::nilpotent6(true)},
          {"nilpotent6_compatible", nilpotent6_compatible(), oracle::nilpotent6(false)},
          {"heisenberg_vaisman", heisenberg_vaisman(1), oracle::heisenberg_line()},
          {"flat_e2r", flat_e2r(), oracle::e2_line()}};
}

const Status ok = Status::holds_exact;

Status status_of(const std::vector<CheckResult>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.id == id) return r.status;
  ADD_FAILURE() << "no result for " << id;
  return Status::fails;
}

const CheckResult& result_of(const std::vector<CheckResult>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.id == id) return r;
  throw std::runtime_error("no result for " + id);
}

}  // namespace

TEST(Riemann, CurvatureMatchesOracle) {
  for (auto& c : oracle_cases()) {
    const auto Pm = build_patch(c.m);
    const Connection<Exact> C(Pm, *c.m.metric);
    const Curvature<Exact> R(C);
    const int n = c.o.dim();
    for (int a = 1; a <= n; ++a)
      for (int b = 1; b <= n; ++b) {
        const auto ea = c.o.e(a), eb = c.o.e(b);
        EXPECT_EQ(C.nabla(to_vec(ea), to_vec(eb)), to_vec(c.o.nabla(ea, eb))) << c.name;
        EXPECT_EQ(q_of(R.ricci(to_vec(ea), to_vec(eb))), c.o.ric(ea, eb)) << c.name << " Ric " << a << b;
        if (a != b) EXPECT_EQ(q_of(sectional(*c.m.metric, R, to_vec(ea), to_vec(eb))), c.o.sectional(ea, eb)) << c.name;
        for (int w = 1; w <= n; ++w) EXPECT_EQ(R.apply(to_vec(ea), to_vec(eb), to_vec(c.o.e(w))), to_vec(c.o.R(ea, eb, c.o.e(w)))) << c.name;
      }
    EXPECT_EQ(R.is_zero(), c.o.flat()) << c.name;
  }
}

TEST(Riemann, KillingMatchesOracle) {
  for (auto& c : oracle_cases()) {
    const auto Pm = build_patch(c.m);
    const int n = c.o.dim();
    for (int a = 1; a <= n; ++a) EXPECT_EQ(is_killing(Pm, *c.m.metric, to_vec(c.o.e(a))), c.o.killing(c.o.e(a))) << c.name << " e" << a;
    const auto st = build_structure(c.m);
    oracle::V z(n, Q(0));
    for (int a = 0; a < n; ++a) z[a] = q_of(st.Z()[a]);
    EXPECT_EQ(is_killing(Pm, *c.m.metric, st.Z()), c.o.killing(z)) << c.name;
  }
}

TEST(Riemann, HyperbolicPlaneHasCurvatureMinusOne) {
  // orthonormal frame e1 = y d/dx, e2 = y d/dy
  Matrix<Exact> a(2, 2);
  a(0, 0) = parse_scalar("y", {"x", "y"});
  a(1, 1) = parse_scalar("y", {"x", "y"});
  const auto Pf = coordinate_patch({"x", "y"}, a);
  const Metric<Exact> id = Metric<Exact>::identity(2);
  const Curvature<Exact> R1{Connection<Exact>(Pf, id)};
  EXPECT_EQ(sectional(id, R1, unit_vec<Exact>(2, 0), unit_vec<Exact>(2, 1)), Exact(-1));

  // coordinate frame with g = (dx^2 + dy^2) / y^2
  const auto Pc = coordinate_patch({"x", "y"}, Matrix<Exact>::identity(2));
  Metric<Exact> g(2, 2);
  g(0, 0) = g(1, 1) = parse_scalar("1/y^2", {"x", "y"});
  const Connection<Exact> C(Pc, g);
  const Curvature<Exact> R2(C);
  EXPECT_EQ(sectional(g, R2, unit_vec<Exact>(2, 0), unit_vec<Exact>(2, 1)), Exact(-1));
  EXPECT_EQ(R2.ricci(), g.scaled(Exact(-1)));
}

TEST(Riemann, LeviCivitaIdentities) {
  const auto c = fixtures::metric_chart();
  EXPECT_EQ(fixtures::levi_civita_violations(c.patch, c.g), 0u);
  const Curvature<Exact> R{Connection<Exact>(c.patch, c.g)};
  EXPECT_FALSE(R.is_zero());
  EXPECT_EQ(R.ricci(), R.ricci().transposed());
  for (const auto& m : fixtures::lie_catalog()) EXPECT_EQ(fixtures::levi_civita_violations(build_patch(m), *m.metric), 0u) << m.name;
}

TEST(Riemann, InvalidMetrics) {
  const auto Pn = build_patch(nilpotent6());
  Metric<Exact> g = Metric<Exact>::identity(6);
  g(0, 1) = Exact(1);
  EXPECT_THROW(check_metric(Pn, g), InvalidMetric);
  g(1, 0) = Exact(1);
  EXPECT_THROW(check_metric(Pn, g), InvalidMetric);
  Metric<Exact> z(6, 6);
  EXPECT_THROW(Connection<Exact>(Pn, z), InvalidMetric);
}

TEST(Verifier, RegistryIsSortedAndResolvable) {
  const auto& reg = check_registry();
  EXPECT_EQ(reg.size(), 28u);
  for (std::size_t i = 1; i < reg.size(); ++i) EXPECT_LT(reg[i - 1].id, reg[i].id);
  for (const auto& c : reg) {
    EXPECT_EQ(find_check(c.id), &c);
    EXPECT_TRUE(in_suite(c, Suite::all));
  }
  EXPECT_EQ(find_check("NOPE"), nullptr);
  EXPECT_THROW(parse_suite("bogus"), std::invalid_argument);
  EXPECT_EQ(parse_suite("curvature"), Suite::curvature);
}

TEST(Verifier, Nilpotent6) {
  const auto m = nilpotent6();
  const auto st = build_structure(m);
  Verifier<Exact> v(st, *m.metric);
  const auto rs = v.run_suite(Suite::all);
  for (const auto& r : rs) {
    if (r.id == "COR_AB" || r.id == "EQ11") {
      EXPECT_EQ(r.status, Status::not_applicable) << r.id;
      EXPECT_EQ(r.reason, "curvature does not vanish on the vertical subbundle");
    } else {
      EXPECT_EQ(r.status, ok) << r.id;
    }
  }
  // Ric(Z) from the oracle
  const auto o = oracle::nilpotent6(true);
  const auto Z = oracle::add(o.e(1), o.e(2));
  EXPECT_EQ(*result_of(rs, "RIC_Z").value, to_string(Q(o.ric(Z, Z) / o.g(Z, Z))));
  EXPECT_EQ(*result_of(rs, "KILLING_SEC").value, o.killing(Z) ? "Z Killing; K(Z, X) = 1/2 for all horizontal X" : "Z not Killing");
  EXPECT_FALSE(v.is_vertical_flat());
  EXPECT_EQ(status_of(rs, "DECOMPOSABLE"), ok);
}

TEST(Verifier, CompatibleButNotAssociated) {
  const auto m = nilpotent6_compatible();
  const auto st = build_structure(m);
  Verifier<Exact> v(st, *m.metric);
  EXPECT_EQ(v.run("COMPATIBLE").status, ok);
  const auto a = v.run("ASSOCIATED");
  ASSERT_EQ(a.status, Status::fails);
  ASSERT_TRUE(a.witness);
  EXPECT_EQ(a.witness->args, (std::vector<std::string>{"e3", "e4"}));
  EXPECT_EQ(a.witness->lhs, "1");
  EXPECT_EQ(a.witness->rhs, "1/2");
  EXPECT_EQ(v.run("NABLA_PHI_GENERAL").status, ok);
  EXPECT_EQ(v.run("REEB_GEODESIC").status, ok);
  const auto mcp = v.run("NABLA_PHI_MCP");
  EXPECT_EQ(mcp.status, Status::not_applicable);
  EXPECT_EQ(mcp.reason, "g not associated");
  EXPECT_EQ(v.run("LEMMA_KERNELS").reason, "g not associated");
  EXPECT_THROW(v.run("NOT_A_CHECK"), UnknownCheck);
}

TEST(Verifier, FlatAndNormalExamples) {
  for (const auto& m : {heisenberg_vaisman(1), heisenberg_vaisman(2), flat_e2r(), flat_e2r2()}) {
    const auto st = build_structure(m);
    Verifier<Exact> v(st, *m.metric);
    const auto rs = v.run_suite(Suite::all);
    EXPECT_TRUE(suite_passed(rs)) << m.name;
    EXPECT_EQ(v.is_vertical_flat(), m.name.starts_with("flat")) << m.name;
    for (const auto& r : rs) {
      // the vertical-flat checks only apply when R_{XY} Z_i = 0
      const bool vf = find_check(r.id)->needs == Needs::vertical_flat;
      EXPECT_TRUE(vf ? r.passed() == v.is_vertical_flat() : r.passed()) << m.name << " " << r.id << " " << r.reason;
    }
  }
}

TEST(Verifier, FlatE2RKillingWitness) {
  const auto m = flat_e2r();
  const auto st = build_structure(m);
  Verifier<Exact> v(st, *m.metric);
  const auto r = v.run("KILLING_SEC");
  EXPECT_EQ(r.status, ok);
  EXPECT_EQ(*r.value, "Z not Killing");
  const auto o = oracle::e2_line();
  EXPECT_FALSE(o.killing(oracle::add(o.e(1), o.e(4))));
  ASSERT_TRUE(r.witness);
  // K(Z, e2) from the oracle
  const auto Z = oracle::add(o.e(1), o.e(4));
  EXPECT_EQ(r.witness->lhs, "K = " + to_string(o.sectional(Z, o.e(2))));
  EXPECT_EQ(*v.run("RIC_Z").value, to_string(Q(o.ric(Z, Z) / o.g(Z, Z))));
}

TEST(Verifier, NeedsPhi) {
  auto m = heisenberg_vaisman(1);
  m.phi.reset();
  const auto st = build_structure(m);
  EXPECT_THROW(Verifier<Exact>(st, *m.metric), std::logic_error);
}

TEST(Verifier, FloatBackendAgreesOnLieExample) {
  const auto m = flat_e2r();
  const auto st = build_structure(m);
  auto fm = to_float(st, m.metric);
  Verifier<Float> v(fm.st, *fm.g);
  const auto rs = v.run_suite(Suite::all);
  for (const auto& r : rs) {
    EXPECT_TRUE(r.passed()) << r.id;
    EXPECT_LE(r.residual, 1e-7) << r.id;
  }
}

TEST(Classification, FlatE2R) {
  const auto m = flat_e2r();
  const auto st = build_structure(m);
  Verifier<Exact> v(st, *m.metric);
  const auto c = classify_vertical_flat(v);
  ASSERT_TRUE(c.attempted) << c.reason;
  EXPECT_EQ(c.hypothesis.status, ok);
  EXPECT_EQ(c.h_eigenvalues, (std::map<long, std::size_t>{{-1, 1}, {0, 2}, {1, 1}}));
  ASSERT_EQ(c.plus1.size(), 1u);
  ASSERT_EQ(c.minus1.size(), 1u);
  EXPECT_EQ(describe(st.patch, c.plus1[0]), "e3");
  EXPECT_EQ(describe(st.patch, c.minus1[0]), "e2");
  for (const auto& r : c.checks) EXPECT_TRUE(r.passed()) << r.id;
  ASSERT_TRUE(c.model);
  EXPECT_EQ(*c.model, "E^2 x E^1 x E^1");
  const auto f = flatness_obstruction(v);
  EXPECT_EQ(f.verdict, FlatVerdict::flat_confirmed);
  EXPECT_EQ(f.certificate, "tr h^2 = 2");
}

TEST(Classification, FlatE2R2) {
  const auto m = flat_e2r2();
  const auto st = build_structure(m);
  Verifier<Exact> v(st, *m.metric);
  const auto c = classify_vertical_flat(v);
  ASSERT_TRUE(c.model);
  EXPECT_EQ(*c.model, "E^2 x E^1 x E^2 x E^1");
  EXPECT_EQ(flatness_obstruction(v).certificate, "tr h^2 = 4");
}

TEST(Classification, HypothesisFailsOnNilpotent6) {
  const auto m = nilpotent6();
  const auto st = build_structure(m);
  Verifier<Exact> v(st, *m.metric);
  const auto c = classify_vertical_flat(v);
  EXPECT_EQ(c.hypothesis.status, Status::fails);
  EXPECT_FALSE(c.attempted);
  EXPECT_FALSE(c.passed());
  // the oracle agrees that R_{e1 e3} Z1 != 0
  const auto o = oracle::nilpotent6(true);
  EXPECT_NE(o.R(o.e(1), o.e(3), o.e(1)), oracle::V(6, Q(0)));
  EXPECT_EQ(flatness_obstruction(v).verdict, FlatVerdict::no_obstruction);
}

TEST(Classification, Flatness) {
  const auto m = heisenberg_vaisman(1);
  const auto st = build_structure(m);
  Verifier<Exact> v(st, *m.metric);
  const auto f = flatness_obstruction(v);
  EXPECT_EQ(f.verdict, FlatVerdict::flat_impossible);
  const auto o = oracle::heisenberg_line();
  const auto Z = oracle::add(o.e(3), o.e(4));
  EXPECT_EQ(f.certificate, "Ric(Z) = " + to_string(Q(o.ric(Z, Z) / o.g(Z, Z))));

  const auto m2 = heisenberg_vaisman(2);
  const auto st2 = build_structure(m2);
  Verifier<Exact> v2(st2, *m2.metric);
  EXPECT_EQ(flatness_obstruction(v2, true).verdict, FlatVerdict::inconsistent);
  EXPECT_EQ(classification_model(2, 0), "E^3 x S^2(4) x E^1");
}
