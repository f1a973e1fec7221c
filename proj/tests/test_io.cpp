#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpgeo/cpgeo.hpp"

using namespace cpgeo;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t error_line(const std::string& text) {
  try {
    parse_manifest(text);
  } catch (const ManifestError& e) {
    return e.line();
  }
  ADD_FAILURE() << "manifest parsed:\n" << text;
  return 0;
}

const char* base = R"(name = "h"
dimension = 4
type = [1, 0]
alpha1 = ["0", "0", "1", "0"]
alpha2 = ["0", "0", "0", "1"]

[frame]
structure_constants = [[1, 2, 3, "2"]]
)";

// values of the jet at sample p, as a plain matrix
std::vector<std::vector<double>> at(const Matrix<Float>& M, std::size_t p) {
  std::vector<std::vector<double>> out(M.rows(), std::vector<double>(M.cols()));
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) out[i][j] = M(i, j).value(M(i, j).is_constant() ? 0 : p);
  return out;
}

}  // namespace

TEST(Manifest, ParsesMinimalLieManifest) {
  const auto m = parse_manifest(base);
  EXPECT_EQ(m.name, "h");
  EXPECT_EQ(m.backend, "auto");
  EXPECT_EQ(m.frame_kind, FrameKind::structure_constants);
  ASSERT_EQ(m.entries.size(), 1u);
  EXPECT_EQ(m.entries[0], (IndexedEntry{0, 1, 2, Exact(2)}));
  EXPECT_FALSE(m.metric);
  const auto st = build_structure(m);
  EXPECT_EQ(st.reeb.Z1, unit_vec<Exact>(4, 2));
}

TEST(Manifest, CatalogRoundTrips) {
  std::vector<Manifest> all = {nilpotent6(), nilpotent6_compatible(), heisenberg_vaisman(1), heisenberg_vaisman(3),
                               flat_e2r(),   flat_e2r2(),             darboux(1, 0),         darboux(2, 1)};
  for (const auto& m : all) {
    const std::string text = emit_manifest(m);
    const auto back = parse_manifest(text);
    EXPECT_EQ(emit_manifest(back), text) << m.name;
    EXPECT_EQ(back.entries, m.entries) << m.name;
    EXPECT_EQ(back.alpha1, m.alpha1) << m.name;
    EXPECT_EQ(back.alpha2, m.alpha2) << m.name;
    EXPECT_EQ(back.phi, m.phi) << m.name;
    EXPECT_EQ(back.metric, m.metric) << m.name;
    EXPECT_EQ(back.frame, m.frame) << m.name;
  }
}

TEST(Manifest, ShippedManifestsMatchCatalog) {
  const std::filesystem::path dir = CPGEO_MANIFEST_DIR;
  const std::map<std::string, Manifest> expect = {{"nilpotent6", nilpotent6()},
                                                  {"nilpotent6_compatible", nilpotent6_compatible()},
                                                  {"heisenberg_vaisman", heisenberg_vaisman(1)},
                                                  {"heisenberg_vaisman_2", heisenberg_vaisman(2)},
                                                  {"flat_e2r", flat_e2r()},
                                                  {"flat_e2r2", flat_e2r2()},
                                                  {"darboux_1_0", darboux(1, 0)},
                                                  {"darboux_1_1", darboux(1, 1)}};
  for (const auto& [name, m] : expect) EXPECT_EQ(slurp(dir / (name + ".toml")), emit_manifest(m)) << name;
}

TEST(Manifest, CoframeDifferentialsGiveBrackets) {
  // dw1 = w3 ^ w4 means [e3, e4] = -e1
  const auto br = brackets_from_differentials({{0, 2, 3, Exact(1)}});
  const auto Pm = FramedPatch<Exact>::lie_from_brackets(4, br);
  EXPECT_EQ(Pm.bracket_frame(2, 3), (Vec<Exact>{Exact(-1), Exact(0), Exact(0), Exact(0)}));
}

TEST(Manifest, ErrorsCarryLines) {
  std::string t = base;
  EXPECT_EQ(error_line(t + "bogus = 1\n"), 9u);
  EXPECT_EQ(error_line(std::string(base).replace(std::string(base).find("\"2\"]]"), 3, "\"1.5\"")), 8u);
  EXPECT_EQ(error_line(std::string(base).replace(std::string(base).find("[1, 2, 3"), 8, "[1, 2, 9")), 8u);
  EXPECT_EQ(error_line(std::string(base).replace(std::string(base).find("type = [1, 0]"), 13, "type = [1]")), 3u);
  EXPECT_EQ(error_line(std::string(base) + "coordinate_frame = [[\"1\"]]\n"), 7u);
  EXPECT_EQ(error_line("name = \"x\"\ndimension = \n"), 2u);
  try {
    parse_manifest("dimension = 4\n");
    FAIL();
  } catch (const ManifestError& e) {
    EXPECT_NE(std::string(e.what()).find("name"), std::string::npos);
  }
  EXPECT_THROW(parse_manifest(std::string(base).replace(std::string(base).find("alpha2"), 6, "alpha3")), ManifestError);
}

TEST(Manifest, ScalarExpressionsInCoordinateFrames) {
  const auto m = parse_manifest(R"toml(name = "c"
dimension = 2
type = [0, 0]
coordinates = ["x", "y"]
alpha1 = ["1", "0"]
alpha2 = ["0", "1 + x^2"]

[frame]
coordinate_frame = [["1", "0"], ["0", "1/(1 + x^2)"]]
)toml");
  EXPECT_EQ(m.frame_kind, FrameKind::coordinate_frame);
  EXPECT_EQ((*m.frame)(1, 1), parse_scalar("1/(1 + x^2)", {"x", "y"}));
  EXPECT_EQ(m.alpha2[1], parse_scalar("x^2 + 1", {"x", "y"}));
}

TEST(Catalog, ListAndBuild) {
  for (const auto& info : list_examples()) EXPECT_NO_THROW(build_example(info.name)) << info.name;
  EXPECT_EQ(build_example("heisenberg_vaisman", {{"n", 2}}).dimension, 6u);
  EXPECT_EQ(build_example("darboux", {{"h", 2}, {"k", 1}}).dimension, 8u);
  EXPECT_THROW(build_example("nope"), std::invalid_argument);
  EXPECT_THROW(build_example("nilpotent6", {{"n", 1}}), std::invalid_argument);
  EXPECT_THROW(build_example("darboux", {{"n", 1}}), std::invalid_argument);
  EXPECT_THROW(build_example("darboux", {{"h", -1}}), std::invalid_argument);
}

TEST(Catalog, EveryExampleIsAContactPair) {
  for (const auto& info : list_examples()) {
    const auto m = build_example(info.name);
    const auto st = build_structure(m);
    EXPECT_EQ(st.dim(), 2 * m.h + 2 * m.k + 2) << info.name;
    if (m.phi) EXPECT_TRUE(validate_phi(st).passed()) << info.name;
    if (m.metric) EXPECT_TRUE(check_associated(st, *m.metric).passed() || info.name == "nilpotent6_compatible") << info.name;
  }
}

TEST(Polarization, DarbouxMetricIsAssociated) {
  // Hand data: coordinates (x, y, z, [u, v,] t), a1 = dz - y dx, a2 = dt - v du,
  // da1(d/dx, d/dy) = 1/2, da2(d/du, d/dv) = 1/2, Z1 = d/dz, Z2 = d/dt.
  for (const auto& [h, k] : {std::pair<std::size_t, std::size_t>{1, 0}, {1, 1}}) {
    const auto m = darboux(h, k);
    const std::size_t n = m.dimension;
    const auto st = build_structure(m);
    const auto model = build_associated_metric(st);
    ASSERT_TRUE(model.g);
    ASSERT_TRUE(model.st.phi);
    const std::size_t z = 2, t = n - 1;
    for (std::size_t p = 0; p < st.patch.sample_points().size(); ++p) {
      const auto& pt = st.patch.sample_points()[p];
      std::vector<double> a1(n, 0.0), a2(n, 0.0);
      a1[0] = -pt[1].get_d();
      a1[z] = 1;
      a2[t] = 1;
      if (k == 1) a2[3] = -pt[4].get_d();
      std::vector<std::vector<double>> D(n, std::vector<double>(n, 0.0));
      D[0][1] = 0.5;
      D[1][0] = -0.5;
      if (k == 1) {
        D[3][4] = 0.5;
        D[4][3] = -0.5;
      }
      const auto G = at(*model.g, p), F = at(*model.st.phi, p);
      for (std::size_t a = 0; a < n; ++a) {
        EXPECT_NEAR(G[a][z], a1[a], 1e-9);
        EXPECT_NEAR(G[a][t], a2[a], 1e-9);
        for (std::size_t b = 0; b < n; ++b) {
          EXPECT_NEAR(G[a][b], G[b][a], 1e-9);
          double gphi = 0, phi2 = 0;
          for (std::size_t c = 0; c < n; ++c) {
            gphi += G[a][c] * F[c][b];
            phi2 += F[a][c] * F[c][b];
          }
          EXPECT_NEAR(gphi, D[a][b], 1e-9) << "point " << p << " (" << a << "," << b << ")";
          const double rhs = (a == b ? -1.0 : 0.0) + (a == z ? a1[b] : 0.0) + (a == t ? a2[b] : 0.0);
          EXPECT_NEAR(phi2, rhs, 1e-9);
        }
      }
      // positive definite: Cholesky succeeds
      auto L = G;
      for (std::size_t j = 0; j < n; ++j) {
        double d = L[j][j];
        for (std::size_t c = 0; c < j; ++c) d -= L[j][c] * L[j][c];
        ASSERT_GT(d, 0.0);
        L[j][j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
          double s = L[i][j];
          for (std::size_t c = 0; c < j; ++c) s -= L[i][c] * L[j][c];
          L[i][j] = s / L[j][j];
        }
      }
    }
    Verifier<Float> v(model.st, *model.g);
    EXPECT_TRUE(v.run("ASSOCIATED").passed());
    EXPECT_TRUE(v.run("PHI_STRUCTURE").passed());
  }
}

TEST(Polarization, RejectsBadSeed) {
  const auto st = build_structure(darboux(1, 0));
  PolarizationOptions opt;
  opt.seed_metric = Metric<Exact>::identity(3);
  EXPECT_THROW(build_associated_metric(st, opt), PolarizationError);
  Metric<Exact> neg = Metric<Exact>::identity(4);
  neg(0, 0) = Exact(-1);
  opt.seed_metric = neg;
  EXPECT_THROW(build_associated_metric(st, opt), PolarizationError);
}

TEST(Report, JsonShape) {
  const auto m = nilpotent6_compatible();
  const auto st = build_structure(m);
  Verifier<Exact> v(st, *m.metric);
  const auto j = report_json(m.name, "exact", {v.run("COMPATIBLE"), v.run("ASSOCIATED"), v.run("NABLA_PHI_MCP")});
  EXPECT_EQ(j["manifold"], "nilpotent6_compatible");
  ASSERT_EQ(j["checks"].size(), 3u);
  EXPECT_EQ(j["checks"][0]["status"], "holds_exact");
  EXPECT_FALSE(j["checks"][0].contains("residual"));
  EXPECT_EQ(j["checks"][1]["status"], "fails");
  EXPECT_EQ(j["checks"][1]["witness"]["args"], nlohmann::json::array({"e3", "e4"}));
  EXPECT_EQ(j["checks"][2]["reason"], "g not associated");
  const auto text = j.dump();
  EXPECT_LT(text.find("\"manifold\""), text.find("\"backend\""));
}
