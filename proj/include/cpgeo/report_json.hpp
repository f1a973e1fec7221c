#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cpgeo/classification.hpp"

namespace cpgeo {

inline nlohmann::ordered_json to_json(const Witness& w) {
  nlohmann::ordered_json j;
  j["args"] = w.args;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  if (w.point) j["point"] = *w.point;
  if (!w.point_coords.empty()) j["point_coords"] = w.point_coords;
  j["residual"] = w.residual;
  if (!w.note.empty()) j["note"] = w.note;
  return j;
}

inline nlohmann::ordered_json to_json(const CheckResult& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["status"] = to_string(r.status);
  if (r.status == Status::holds_within_tol || r.status == Status::fails) j["residual"] = r.residual;
  if (r.witness) j["witness"] = to_json(*r.witness);
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.value) j["value"] = *r.value;
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (!r.subchecks.empty()) {
    auto subs = nlohmann::ordered_json::array();
    for (const auto& s : r.subchecks) subs.push_back(to_json(s));
    j["subchecks"] = subs;
  }
  return j;
}

template <class S>
nlohmann::ordered_json to_json(const ClassificationReport<S>& c, const FramedPatch<S>& P) {
  nlohmann::ordered_json j;
  j["hypothesis"] = to_json(c.hypothesis);
  j["attempted"] = c.attempted;
  if (!c.reason.empty()) j["reason"] = c.reason;
  if (c.attempted) {
    nlohmann::ordered_json eig = nlohmann::ordered_json::object();
    for (const auto& [lambda, mult] : c.h_eigenvalues) eig[std::to_string(lambda)] = mult;
    j["h_eigenvalues"] = eig;
    auto basis = [&](const std::vector<Vec<S>>& B) {
      std::vector<std::string> out;
      for (const auto& v : B) out.push_back(describe(P, v));
      return out;
    };
    j["eigensplit"] = {{"[+1]_1", basis(c.plus1)}, {"[-1]_1", basis(c.minus1)}, {"[+1]_2", basis(c.plus2)}, {"[-1]_2", basis(c.minus2)}};
    auto checks = nlohmann::ordered_json::array();
    for (const auto& r : c.checks) checks.push_back(to_json(r));
    j["checks"] = checks;
    auto sec = nlohmann::ordered_json::array();
    for (const auto& [plane, K] : c.plus1_sectional) sec.push_back({{"plane", plane}, {"K", K}});
    j["plus1_sectional"] = sec;
  }
  if (c.model) j["model"] = *c.model;
  return j;
}

inline nlohmann::ordered_json to_json(const FlatnessReport& f) {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(f.verdict);
  j["normal"] = f.normal;
  j["flat"] = f.flat;
  if (!f.certificate.empty()) j["certificate"] = f.certificate;
  j["message"] = f.message;
  return j;
}

inline nlohmann::ordered_json report_json(const std::string& manifold, const std::string& backend, const std::vector<CheckResult>& checks) {
  nlohmann::ordered_json j;
  j["manifold"] = manifold;
  j["backend"] = backend;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : checks) arr.push_back(to_json(r));
  j["checks"] = arr;
  return j;
}

}  // namespace cpgeo
