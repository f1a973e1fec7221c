// cpgeo: command-line front end for the contact pair verifier.
#include <CLI11.hpp>

#include <cpgeo/cpgeo.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

using namespace cpgeo;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input that parses but is not a valid geometric object.
struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Manifest load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_manifest(ss.str(), path);
  } catch (const ManifestError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

ContactPairStructure<Exact> structure_of(const Manifest& m) {
  try {
    return build_structure(m);
  } catch (const InvalidPatch& e) {
    throw MathError(std::string("invalid frame: ") + e.what());
  } catch (const InvalidContactPair& e) {
    throw MathError(std::string("not a contact pair: ") + e.what());
  }
}

std::string vec_text(const FramedPatch<Exact>& P, const Vec<Exact>& v) { return describe(P, v); }

void print_check(std::ostream& os, const CheckResult& r, int indent = 0) {
  os << std::string(indent, ' ') << std::left << std::setw(20) << r.id << ' ' << std::setw(16) << to_string(r.status);
  if (r.status == Status::holds_within_tol || r.status == Status::fails) os << " residual " << std::setprecision(3) << r.residual;
  if (!r.reason.empty()) os << " (" << r.reason << ")";
  if (r.value) os << "  " << *r.value;
  os << '\n';
  if (r.witness && !r.passed()) {
    const auto& w = *r.witness;
    os << std::string(indent + 2, ' ') << "witness";
    if (!w.args.empty()) {
      os << " at (";
      for (std::size_t i = 0; i < w.args.size(); ++i) os << (i ? ", " : "") << w.args[i];
      os << ")";
    }
    if (!w.note.empty()) os << " [" << w.note << "]";
    os << ": lhs = " << w.lhs << ", rhs = " << w.rhs;
    if (!w.point_coords.empty()) {
      os << " at point (";
      for (std::size_t i = 0; i < w.point_coords.size(); ++i) os << (i ? ", " : "") << w.point_coords[i];
      os << ")";
    }
    os << '\n';
  } else if (r.witness && !r.detail.empty()) {
    os << std::string(indent + 2, ' ') << r.detail << '\n';
  }
}

struct CheckOptions {
  std::string suite = "all";
  std::string backend;
  std::vector<std::string> ids;
  double tol = -1;
  int samples = -1;
  long seed = -1;
  bool json = false;
};

/// Chooses the backend: an explicit choice, the manifest's, or exact when a
/// metric is given and float otherwise.
std::string resolve_backend(const Manifest& m, const std::string& requested) {
  std::string b = requested.empty() ? m.backend : requested;
  if (b == "auto") b = m.metric ? "exact" : "float";
  if (b != "exact" && b != "float") throw UsageError("backend must be exact or float");
  if (m.metric && !m.phi) throw UsageError("a manifest with a metric must also give phi");
  if (b == "exact" && !m.metric) throw UsageError("the exact backend needs a metric; use --backend float to polarize one");
  return b;
}

template <class S>
std::vector<CheckResult> run_checks(Verifier<S>& v, const CheckOptions& o) {
  if (o.ids.empty()) return v.run_suite(parse_suite(o.suite));
  std::vector<CheckResult> out;
  for (const auto& id : o.ids) out.push_back(v.run(id));
  std::sort(out.begin(), out.end(), [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
  return out;
}

int report(const Manifest& m, const std::string& backend, const std::vector<CheckResult>& rs, bool json) {
  if (json) {
    std::cout << report_json(m.name, backend, rs).dump(2) << '\n';
  } else {
    std::cout << m.name << " (" << backend << " backend)\n";
    std::size_t pass = 0, fail = 0, na = 0;
    for (const auto& r : rs) {
      print_check(std::cout, r, 2);
      if (!r.applicable()) ++na;
      else if (r.passed()) ++pass;
      else ++fail;
    }
    std::cout << pass << " passed, " << fail << " failed, " << na << " not applicable\n";
  }
  return suite_passed(rs) ? kPass : kFail;
}

void apply_sampling(Manifest& m, const CheckOptions& o) {
  if (o.samples >= 0) {
    m.extra_samples = std::size_t(o.samples);
    m.sample_points.clear();
  }
  if (o.seed >= 0) m.seed = std::uint64_t(o.seed);
}

int cmd_check(const std::string& path, CheckOptions o) {
  Manifest m = load(path);
  apply_sampling(m, o);
  const std::string backend = resolve_backend(m, o.backend);
  parse_suite(o.suite);
  for (const auto& id : o.ids)
    if (!find_check(id)) throw UsageError("unknown check id '" + id + "'");
  auto st = structure_of(m);
  if (backend == "exact") {
    Verifier<Exact> v(st, *m.metric, o.tol >= 0 ? o.tol : 0.0);
    return report(m, backend, run_checks(v, o), o.json);
  }
  FloatModel fm = m.metric ? to_float(st, m.metric) : build_associated_metric(st);
  Verifier<Float> v(fm.st, *fm.g, o.tol >= 0 ? o.tol : 1e-7);
  return report(m, backend, run_checks(v, o), o.json);
}

int cmd_validate(const std::string& path) {
  Manifest m = load(path);
  auto st = structure_of(m);
  const auto& P = st.patch;
  std::cout << m.name << ": contact pair of type (" << st.pair.h << ", " << st.pair.k << ") on a " << st.dim() << "-dimensional "
            << (P.is_lie() ? "Lie frame" : "coordinate patch") << '\n';
  std::cout << "  volume coefficient " << to_string(st.pair.volume_coefficient, P.vars()) << " (" << to_string(st.pair.volume) << ")\n";
  std::cout << "  Z1 = " << vec_text(P, st.reeb.Z1) << ", Z2 = " << vec_text(P, st.reeb.Z2) << (st.reeb.commute ? "" : " (do not commute)") << '\n';
  int rc = kPass;
  if (st.phi) {
    auto r = validate_phi(st);
    print_check(std::cout, r, 2);
    if (!r.passed()) rc = kFail;
    else std::cout << "  phi " << (is_decomposable(st) ? "decomposable" : "not decomposable") << '\n';
  }
  if (m.metric) {
    try {
      check_metric(P, *m.metric);
      std::cout << "  metric symmetric positive definite\n";
      if (st.phi && validate_phi(st).passed()) {
        for (auto r : {check_compatible(st, *m.metric), check_associated(st, *m.metric)}) print_check(std::cout, r, 2);
      }
    } catch (const InvalidMetric& e) {
      std::cout << "  invalid metric: " << e.what() << '\n';
      rc = kFail;
    }
  }
  return rc;
}

void print_basis(const std::string& label, const FramedPatch<Exact>& P, const std::vector<Vec<Exact>>& B) {
  std::cout << "  " << label << ": {";
  for (std::size_t i = 0; i < B.size(); ++i) std::cout << (i ? ", " : "") << vec_text(P, B[i]);
  std::cout << "}\n";
}

int cmd_structure(const std::string& path) {
  Manifest m = load(path);
  auto st = structure_of(m);
  const auto& P = st.patch;
  std::cout << m.name << ": type (" << st.pair.h << ", " << st.pair.k << ")\n";
  std::cout << "  Z1 = " << vec_text(P, st.reeb.Z1) << "\n  Z2 = " << vec_text(P, st.reeb.Z2) << '\n';
  print_basis("TG1", P, st.split.G1);
  print_basis("TG2", P, st.split.G2);
  print_basis("TF1", P, st.split.F1);
  print_basis("TF2", P, st.split.F2);
  for (int i = 1; i <= 2; ++i) {
    const auto D = st.dalpha(i).matrix();
    std::cout << "  da" << i << " nonzero components:";
    bool any = false;
    for (std::size_t a = 0; a < st.dim(); ++a)
      for (std::size_t b = a + 1; b < st.dim(); ++b)
        if (!D(a, b).is_zero()) {
          std::cout << " (" << P.frame_name(a) << "," << P.frame_name(b) << ")=" << to_string(D(a, b), P.vars());
          any = true;
        }
    std::cout << (any ? "" : " none") << '\n';
  }
  if (!st.phi) return kPass;
  if (!validate_phi(st).passed()) {
    std::cout << "  phi is not a contact pair structure\n";
    return kFail;
  }
  std::cout << "  phi " << (is_decomposable(st) ? "decomposable" : "not decomposable") << '\n';
  const auto N = normality_tensors(st);
  std::cout << "  normal: " << (N.is_normal ? "yes" : "no");
  if (N.witness) {
    const auto [a, b] = *N.witness;
    std::cout << ", N1(" << P.frame_name(a) << ", " << P.frame_name(b) << ") = " << vec_text(P, N.N1[a][b]);
  }
  std::cout << "\n  N2 vanishes: " << (N.n2_vanish ? "yes" : "no") << '\n';
  const auto H = h_tensors(st, false);
  bool hz = true;
  for (std::size_t a = 0; a < st.dim(); ++a)
    for (std::size_t b = 0; b < st.dim(); ++b) hz &= H.h(a, b).is_zero();
  std::cout << "  h = 1/2 L_Z phi " << (hz ? "vanishes" : "is nonzero") << '\n';
  if (!hz)
    for (std::size_t a = 0; a < st.dim(); ++a) {
      const auto col = H.h.col(a);
      if (!all_near_zero(col, 0)) std::cout << "    h " << P.frame_name(a) << " = " << vec_text(P, col) << '\n';
    }
  return kPass;
}

template <class S>
int classify_report(const Manifest& m, const std::string& backend, Verifier<S>& v, bool json, bool assert_flat) {
  auto c = classify_vertical_flat(v);
  std::optional<FlatnessReport> flat;
  if (v.precondition(Needs::mcp).empty()) flat = flatness_obstruction(v, assert_flat);
  if (json) {
    nlohmann::ordered_json j;
    j["manifold"] = m.name;
    j["backend"] = backend;
    j["classification"] = to_json(c, v.structure().patch);
    if (flat) j["flatness"] = to_json(*flat);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << m.name << " (" << backend << " backend)\n";
    print_check(std::cout, c.hypothesis, 2);
    if (!c.attempted) std::cout << "  no classification: " << c.reason << '\n';
    else {
      std::cout << "  h eigenvalues:";
      for (const auto& [lambda, mult] : c.h_eigenvalues) std::cout << ' ' << lambda << " (x" << mult << ")";
      std::cout << '\n';
      auto basis = [&](const char* label, const std::vector<Vec<S>>& B) {
        std::cout << "  " << label << ": {";
        for (std::size_t i = 0; i < B.size(); ++i) std::cout << (i ? ", " : "") << describe(v.structure().patch, B[i]);
        std::cout << "}\n";
      };
      basis("[+1]_1", c.plus1);
      basis("[-1]_1", c.minus1);
      basis("[+1]_2", c.plus2);
      basis("[-1]_2", c.minus2);
      for (const auto& r : c.checks) print_check(std::cout, r, 2);
      for (const auto& [plane, K] : c.plus1_sectional) std::cout << "  K(" << plane << ") = " << K << '\n';
      if (c.model) std::cout << "  model: " << *c.model << " (consistent with local isometry)\n";
    }
    if (flat) std::cout << "  flatness: " << flat->message << '\n';
  }
  return c.passed() ? kPass : kFail;
}

int cmd_classify(const std::string& path, const std::string& requested, bool json, bool assert_flat) {
  Manifest m = load(path);
  const std::string backend = resolve_backend(m, requested);
  auto st = structure_of(m);
  if (backend == "exact") {
    Verifier<Exact> v(st, *m.metric);
    return classify_report(m, backend, v, json, assert_flat);
  }
  FloatModel fm = m.metric ? to_float(st, m.metric) : build_associated_metric(st);
  Verifier<Float> v(fm.st, *fm.g);
  return classify_report(m, backend, v, json, assert_flat);
}

std::map<std::string, long> parse_params(const std::vector<std::string>& kv) {
  std::map<std::string, long> out;
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("parameters are key=value, got '" + s + "'");
    try {
      out[s.substr(0, eq)] = std::stol(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("parameter '" + s + "' needs an integer value");
    }
  }
  return out;
}

int cmd_catalog_emit(const std::string& name, const std::vector<std::string>& kv, const std::string& out_path) {
  Manifest m;
  try {
    m = build_example(name, parse_params(kv));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::string text = emit_manifest(m);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw UsageError("cannot write " + out_path);
    f << text;
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verifier for metric contact pair geometry"};
  app.require_subcommand(1);
  std::string file;

  auto* validate = app.add_subcommand("validate", "check that a manifest defines a contact pair (and phi, g if given)");
  validate->add_option("file", file, "manifest (TOML)")->required();

  auto* structure = app.add_subcommand("structure", "print Reeb fields, splittings, normality and h");
  structure->add_option("file", file, "manifest (TOML)")->required();

  CheckOptions co;
  auto* check = app.add_subcommand("check", "run a verifier suite");
  check->add_option("file", file, "manifest (TOML)")->required();
  check->add_option("--suite", co.suite, "core, curvature, classification or all")->check(CLI::IsMember({"core", "curvature", "classification", "all"}));
  check->add_option("--id", co.ids, "run only these check ids");
  check->add_option("--backend", co.backend, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  check->add_option("--tol", co.tol, "float tolerance (default 1e-7)")->check(CLI::NonNegativeNumber);
  check->add_option("--samples", co.samples, "random sample points for coordinate patches")->check(CLI::NonNegativeNumber);
  check->add_option("--seed", co.seed, "sample seed")->check(CLI::NonNegativeNumber);
  check->add_flag("--json", co.json, "JSON report on stdout");

  std::string classify_backend;
  bool classify_json = false, assert_flat = false;
  auto* classify = app.add_subcommand("classify", "vertical-flat classification diagnostics");
  classify->add_option("file", file, "manifest (TOML)")->required();
  classify->add_option("--backend", classify_backend, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  classify->add_flag("--json", classify_json, "JSON report on stdout");
  classify->add_flag("--assert-flat", assert_flat, "take R = 0 as given in the flatness report");

  auto* catalog = app.add_subcommand("catalog", "built-in examples");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "list examples");
  std::string name, out_path;
  std::vector<std::string> params;
  auto* emit = catalog->add_subcommand("emit", "write an example manifest");
  emit->add_option("name", name, "example name")->required();
  emit->add_option("--param", params, "integer parameter, key=value");
  emit->add_option("-o,--output", out_path, "output file (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*structure) return cmd_structure(file);
    if (*check) return cmd_check(file, co);
    if (*classify) return cmd_classify(file, classify_backend, classify_json, assert_flat);
    if (*list) {
      for (const auto& c : list_examples())
        std::cout << std::left << std::setw(24) << c.name << std::setw(8) << (c.parameters.empty() ? "-" : c.parameters) << c.summary << '\n';
      return kPass;
    }
    if (*emit) return cmd_catalog_emit(name, params, out_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const MathError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  } catch (const InvalidMetric& e) {
    std::cerr << "error: invalid metric: " << e.what() << '\n';
    return kFail;
  } catch (const PolarizationError& e) {
    std::cerr << "error: polarization failed: " << e.what() << '\n';
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
