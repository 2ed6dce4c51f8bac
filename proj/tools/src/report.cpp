// SPDX-License-Identifier: MIT
#include "bandctl/cli/report.hpp"

#include "bandctl/errors.hpp"

namespace bandctl::cli {

namespace {

json parts_json(const CostParts& p) {
  return {{"holding", p.holding},
          {"shortage", p.shortage},
          {"switching", p.switching},
          {"total", p.total()}};
}

CostParts parts_from(const json& j) {
  return {j.at("holding").get<double>(), j.at("shortage").get<double>(),
          j.at("switching").get<double>()};
}

json estimate_json(const Estimate& e) { return {{"mean", e.mean}, {"std_error", e.std_error}}; }

Estimate estimate_from(const json& j) {
  return {j.at("mean").get<double>(), j.at("std_error").get<double>()};
}

StrategyKind kind_from(const std::string& s) {
  if (s == "doshi") return StrategyKind::Doshi;
  if (s == "one") return StrategyKind::TypeOne;
  if (s == "two") return StrategyKind::TypeTwo;
  throw Error(ErrorCode::InvalidParameter, "unknown strategy kind '" + s + "'");
}

json strategy_json(const BandStrategy& s) {
  return {{"kind", std::string(to_string(s.kind))},
          {"y2", s.y2},
          {"y3", s.y3},
          {"y1", s.y1},
          {"y4", s.y4 ? json(*s.y4) : json(nullptr)}};
}

BandStrategy strategy_from(const json& j) {
  BandStrategy s;
  s.kind = kind_from(j.at("kind").get<std::string>());
  s.y2 = j.at("y2").get<double>();
  s.y3 = j.at("y3").get<double>();
  s.y1 = j.at("y1").get<double>();
  if (!j.at("y4").is_null()) s.y4 = j.at("y4").get<double>();
  return s;
}

json verification_json(const VerificationSummary& v) {
  const auto& b = v.boundary;
  return {{"pass", v.pass},
          {"tolerance", v.tolerance},
          {"worst", {{"kind", v.worst_kind}, {"value", v.worst_value}, {"x", v.worst_x}}},
          {"boundary",
           {{"w1_b", b.w1_b},
            {"w2_b", b.w2_b},
            {"w0_b", b.w0_b},
            {"slack1", b.slack1},
            {"slack2", b.slack2},
            {"l0", b.l0}}},
          {"failures", v.failures}};
}

VerificationSummary verification_from(const json& j) {
  VerificationSummary v;
  v.pass = j.at("pass").get<bool>();
  v.tolerance = j.at("tolerance").get<double>();
  v.worst_kind = j.at("worst").at("kind").get<std::string>();
  v.worst_value = j.at("worst").at("value").get<double>();
  v.worst_x = j.at("worst").at("x").get<double>();
  const json& b = j.at("boundary");
  v.boundary = {b.at("w1_b").get<double>(),  b.at("w2_b").get<double>(),
                b.at("w0_b").get<double>(),  b.at("slack1").get<double>(),
                b.at("slack2").get<double>(), b.at("l0").get<double>()};
  v.failures = j.at("failures").get<std::vector<std::string>>();
  return v;
}

json simulated_json(const SimEstimate& e) {
  return {{"mean", e.mean},
          {"std_error", e.std_error},
          {"n_paths", e.n_paths},
          {"holding", estimate_json(e.holding)},
          {"shortage", estimate_json(e.shortage)},
          {"switching", estimate_json(e.switching)},
          {"truncation_horizon", e.truncation_horizon}};
}

SimEstimate simulated_from(const json& j) {
  SimEstimate e;
  e.mean = j.at("mean").get<double>();
  e.std_error = j.at("std_error").get<double>();
  e.n_paths = j.at("n_paths").get<std::size_t>();
  e.holding = estimate_from(j.at("holding"));
  e.shortage = estimate_from(j.at("shortage"));
  e.switching = estimate_from(j.at("switching"));
  e.truncation_horizon = j.at("truncation_horizon").get<double>();
  return e;
}

}  // namespace

VerificationSummary VerificationSummary::from(const VerificationReport& r) {
  VerificationSummary v;
  v.pass = r.pass;
  v.tolerance = r.tolerance;
  v.worst_kind = r.worst_kind;
  v.worst_value = r.worst_value;
  v.worst_x = r.worst_x;
  v.boundary = r.boundary;
  v.failures = r.failures;
  return v;
}

json to_json(const RunReport& r) {
  json j;
  j["tool"] = {{"name", "bandctl"}, {"version", r.version}};
  j["command"] = r.command;
  j["model"] = model_to_json(r.model);
  j["seed"] = r.seed;
  j["strategy"] = r.strategy ? strategy_json(*r.strategy) : json(nullptr);
  j["objective"] = r.objective ? json(*r.objective) : json(nullptr);
  j["level_b"] = r.level_b ? parts_json(*r.level_b) : json(nullptr);
  j["verification"] = r.verification ? verification_json(*r.verification) : json(nullptr);
  json stages = json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"strategy", strategy_json(s.strategy)},
                      {"objective", s.objective},
                      {"evaluations", s.evaluations},
                      {"verification", verification_json(s.verification)}});
  }
  j["stages"] = stages;
  json points = json::array();
  for (const auto& p : r.points) {
    json e = {{"x", p.x},
              {"phase", index(p.phase)},
              {"analytic", p.analytic ? parts_json(*p.analytic) : json(nullptr)}};
    if (p.simulated) {
      const double se = p.simulated->std_error;
      e["simulated"] = simulated_json(*p.simulated);
      const bool scored = p.analytic && se > 0.0;
      e["z_score"] = scored ? json((p.simulated->mean - p.analytic->total()) / se) : json(nullptr);
    }
    points.push_back(e);
  }
  j["points"] = points;
  j["timing"] = {{"seconds", r.timing_seconds}};
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  r.version = j.at("tool").at("version").get<std::string>();
  r.command = j.at("command").get<std::string>();
  r.model = model_from_json(j.at("model"));
  r.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("strategy").is_null()) r.strategy = strategy_from(j.at("strategy"));
  if (!j.at("objective").is_null()) r.objective = j.at("objective").get<double>();
  if (!j.at("level_b").is_null()) r.level_b = parts_from(j.at("level_b"));
  if (!j.at("verification").is_null()) r.verification = verification_from(j.at("verification"));
  for (const auto& s : j.at("stages")) {
    r.stages.push_back({strategy_from(s.at("strategy")), s.at("objective").get<double>(),
                        s.at("evaluations").get<int>(), verification_from(s.at("verification"))});
  }
  for (const auto& p : j.at("points")) {
    PointRecord rec;
    rec.x = p.at("x").get<double>();
    rec.phase = static_cast<Phase>(p.at("phase").get<int>());
    if (!p.at("analytic").is_null()) rec.analytic = parts_from(p.at("analytic"));
    if (p.contains("simulated")) rec.simulated = simulated_from(p.at("simulated"));
    r.points.push_back(rec);
  }
  r.timing_seconds = j.at("timing").at("seconds").get<double>();
  return r;
}

json without_timing(json j) {
  j.erase("timing");
  return j;
}

}  // namespace bandctl::cli
