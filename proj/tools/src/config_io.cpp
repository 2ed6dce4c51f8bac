// SPDX-License-Identifier: MIT
#include "bandctl/cli/config_io.hpp"

#include <fstream>

#include "bandctl/errors.hpp"

namespace bandctl::cli {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::InvalidParameter, "config: " + what);
}

double number(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) bad(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

DemandLaw demand_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    bad("demand needs a string 'kind'");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "exponential") return DemandLaw::exponential(number(j, "rate"));
  if (kind == "hyperexponential") {
    if (!j.contains("atoms") || !j.at("atoms").is_array()) bad("hyperexponential needs 'atoms'");
    std::vector<DemandAtom> atoms;
    for (const auto& a : j.at("atoms")) atoms.push_back({number(a, "weight"), number(a, "rate")});
    return DemandLaw::hyper_exponential(std::move(atoms));
  }
  bad("unknown demand kind '" + kind + "'");
}

json demand_to_json(const DemandLaw& d) {
  if (d.kind() == DemandLaw::Kind::Exponential) {
    return {{"kind", "exponential"}, {"rate", d.atoms().front().rate}};
  }
  json atoms = json::array();
  for (const auto& a : d.atoms()) atoms.push_back({{"weight", a.weight}, {"rate", a.rate}});
  return {{"kind", "hyperexponential"}, {"atoms", atoms}};
}

}  // namespace

ModelConfig model_from_json(const json& doc) {
  if (!doc.is_object()) bad("top level must be an object");
  ModelConfig m;
  m.sigma1 = number(doc, "sigma1");
  m.sigma2 = number(doc, "sigma2");
  m.lambda = number(doc, "lambda");
  m.q = number(doc, "q");
  m.b = number(doc, "b");
  m.l = number_or(doc, "l", 0.0);
  if (!doc.contains("demand")) bad("missing field 'demand'");
  m.demand = demand_from_json(doc.at("demand"));
  for (auto [key, h] : {std::pair{"h1", &m.h1}, std::pair{"h2", &m.h2}}) {
    if (!doc.contains(key)) bad(std::string("missing field '") + key + "'");
    h->a = number(doc.at(key), "a");
    h->c = number(doc.at(key), "c");
  }
  m.h0_b = number(doc, "h0_b");
  if (!doc.contains("penalty")) bad("missing field 'penalty'");
  m.penalty = {number(doc.at("penalty"), "p0"), number(doc.at("penalty"), "p1")};
  if (!doc.contains("switching")) bad("missing field 'switching'");
  const json& k = doc.at("switching");
  if (!k.is_array() || k.size() != 3) bad("switching must be a 3x3 array");
  for (int i = 0; i < 3; ++i) {
    if (!k[i].is_array() || k[i].size() != 3) bad("switching must be a 3x3 array");
    for (int j = 0; j < 3; ++j) {
      const json& v = k[i][j];
      if (i == j) {
        if (!v.is_null()) bad("switching diagonal must be null");
        continue;
      }
      if (!v.is_number()) bad("switching off-diagonal entries must be numbers");
      m.switching.k[i][j] = v.get<double>();
    }
  }
  return m;
}

json model_to_json(const ModelConfig& m) {
  json k = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int j = 0; j < 3; ++j) row.push_back(i == j ? json(nullptr) : json(m.switching.k[i][j]));
    k.push_back(row);
  }
  return {{"sigma1", m.sigma1},
          {"sigma2", m.sigma2},
          {"lambda", m.lambda},
          {"q", m.q},
          {"b", m.b},
          {"l", m.l},
          {"demand", demand_to_json(m.demand)},
          {"h1", {{"a", m.h1.a}, {"c", m.h1.c}}},
          {"h2", {{"a", m.h2.a}, {"c", m.h2.c}}},
          {"h0_b", m.h0_b},
          {"penalty", {{"p0", m.penalty.p0}, {"p1", m.penalty.p1}}},
          {"switching", k}};
}

ModelConfig load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace bandctl::cli
