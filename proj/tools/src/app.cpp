// SPDX-License-Identifier: MIT
#include "bandctl/cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "bandctl/cli/report.hpp"
#include "bandctl/errors.hpp"
#include "bandctl/optimize.hpp"
#include "bandctl/simulate.hpp"

namespace bandctl::cli {

namespace {

std::shared_ptr<spdlog::logger> logger() {
  static auto log = [] {
    auto l = spdlog::stderr_color_mt("bandctl");
    const char* env = std::getenv("BANDCTL_LOG");
    l->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
    l->set_pattern("[%l] %v");
    return l;
  }();
  return log;
}

struct Common {
  std::string config;
  std::string output;
  int jobs = 1;
  std::uint64_t seed = 1;
};

struct BandFlags {
  double y1 = 0.0;
  double y2 = 0.0;
  std::optional<double> y3;
  std::optional<double> y4;

  BandStrategy strategy(double b) const {
    const double mid = y3.value_or(y2);
    if (y4) {
      const BandTwo band{y2, mid, y1, *y4};
      check_band(band, b);
      return BandStrategy::from(band);
    }
    const BandOne band{y2, mid, y1};
    check_band(band, b);
    return BandStrategy::from(band);
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config, "Model config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--output", c.output, "Write the report here instead of stdout");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Base seed for restarts and simulation");
}

void add_band(CLI::App* cmd, BandFlags& f) {
  cmd->add_option("--y1", f.y1, "Phase-1 to phase-2 switching level")->required();
  cmd->add_option("--y2", f.y2, "Phase-2 to phase-1 switching level")->required();
  cmd->add_option("--y3", f.y3, "Restart selection level (defaults to y2)");
  cmd->add_option("--y4", f.y4, "Start of the upper phase-1 component (type two)");
}

void add_verify(CLI::App* cmd, VerifyOptions& v) {
  cmd->add_option("--tol", v.tol, "Verification tolerance before scaling by max|V|")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid", v.grid, "Verification grid size")->check(CLI::Range(10, 100000));
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidParameter, "cannot write " + c.output);
  f << text;
}

void emit(const Common& c, const RunReport& r, std::ostream& out) {
  emit(c, to_json(r).dump(2) + "\n", out);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> uniform_levels(double b, int points) {
  std::vector<double> xs;
  for (int k = 0; k < points; ++k) xs.push_back(b * k / points);
  return xs;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Band switching strategies for a two-rate production-inventory system", "bandctl"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  Common common;
  BandFlags band;
  VerifyOptions vopt;
  std::string kind = "auto";
  bool require_verified = false;
  int points = 21;
  std::size_t paths = 100000;
  std::vector<double> x0s;
  int phase0 = 1;

  auto* solve = app.add_subcommand("solve", "Optimize and verify, escalating through band classes");
  add_common(solve, common);
  add_verify(solve, vopt);
  solve->add_option("--strategy", kind, "Band class")
      ->check(CLI::IsMember({"doshi", "one", "two", "auto"}));
  solve->add_flag("--require-verified", require_verified, "Exit 3 unless the result verifies");

  auto* evaluate = app.add_subcommand("evaluate", "Cost surface of a given band");
  add_common(evaluate, common);
  add_band(evaluate, band);
  evaluate->add_option("--points", points, "Levels per phase in the report")
      ->check(CLI::Range(1, 100000));

  auto* verify = app.add_subcommand("verify", "Check a given band against the HJB conditions");
  add_common(verify, common);
  add_band(verify, band);
  add_verify(verify, vopt);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of a given band's cost");
  add_common(simulate, common);
  add_band(simulate, band);
  simulate->add_option("--paths", paths, "Paths per start")->check(CLI::Range(2, 100000000));
  simulate->add_option("--x0", x0s, "Start levels (default: a grid of --points levels)");
  simulate->add_option("--phase", phase0, "Start phase, 0 only at b")->check(CLI::Range(0, 2));
  simulate->add_option("--points", points, "Grid size when no --x0 is given")
      ->check(CLI::Range(1, 100000));

  auto* plot = app.add_subcommand("plot-data", "CSV of the cost surface, thresholds included");
  add_common(plot, common);
  add_band(plot, band);
  plot->add_option("--points", points, "Uniform levels on [0, b]")->check(CLI::Range(2, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kValidation;
  }

  const auto t0 = Clock::now();
  try {
    RunReport report;
    report.seed = common.seed;
    report.model = load_model(common.config);
    vopt.jobs = common.jobs;

    if (solve->parsed()) {
      report.command = "solve";
      const ValidatedModel model = validate(report.model);
      OptimizeOptions opt;
      opt.seed = common.seed;
      opt.jobs = common.jobs;
      StrategyKind first = StrategyKind::Doshi;
      StrategyKind last = StrategyKind::TypeTwo;
      if (kind == "doshi") last = StrategyKind::Doshi;
      if (kind == "one") first = last = StrategyKind::TypeOne;
      if (kind == "two") first = StrategyKind::TypeTwo;
      logger()->info("solving {} over classes {}..{}", common.config, to_string(first),
                     to_string(last));
      const OptimizationResult res = escalate(model, first, last, opt, vopt);
      for (const auto& s : res.stages) {
        logger()->info("{} band V0={} verified={}", to_string(s.search.strategy.kind),
                       s.search.objective, s.report.pass);
        report.stages.push_back({s.search.strategy, s.search.objective, s.search.evaluations,
                                 VerificationSummary::from(s.report)});
      }
      report.strategy = res.strategy;
      report.objective = res.objective;
      report.level_b = res.level_b;
      report.verification = VerificationSummary::from(res.report);
      report.timing_seconds = seconds_since(t0);
      emit(common, report, out);
      if (require_verified && !res.verified) {
        err << "bandctl: best " << to_string(res.strategy.kind)
            << " band failed verification: " << res.report.worst_kind << " = "
            << res.report.worst_value << " at x=" << res.report.worst_x << "\n";
        return kNotVerified;
      }
      return kOk;
    }

    if (simulate->parsed()) {
      report.command = "simulate";
      const ValidatedModel model = validate(report.model, Scope::Simulation);
      const double b = model->b;
      const BandStrategy st = band.strategy(b);
      report.strategy = st;
      std::optional<CostSurface> surface;
      if (model->l == 0.0) surface = build_surface(validate(report.model), st);
      const Phase p = static_cast<Phase>(phase0);
      if (x0s.empty()) x0s = p == Phase::Off ? std::vector<double>{b} : uniform_levels(b, points);
      std::vector<SimStart> starts;
      for (double x : x0s) starts.push_back({x, p});
      SimOptions sopt;
      sopt.jobs = common.jobs;
      const auto est = estimate_cost_many(model, SimStrategy::from(st, b, model->l), starts, paths,
                                          common.seed, sopt);
      for (std::size_t i = 0; i < starts.size(); ++i) {
        PointRecord rec{starts[i].x0, p, std::nullopt, est[i]};
        if (surface) {
          rec.analytic = p == Phase::Off ? surface->level_b() : surface->at(p, starts[i].x0);
        }
        report.points.push_back(rec);
      }
      if (surface) {
        report.objective = surface->objective();
        report.level_b = surface->level_b();
      }
      report.timing_seconds = seconds_since(t0);
      emit(common, report, out);
      return kOk;
    }

    const ValidatedModel model = validate(report.model);
    const double b = model->b;
    const BandStrategy st = band.strategy(b);
    const CostSurface surface = build_surface(model, st);
    report.strategy = st;
    report.objective = surface.objective();
    report.level_b = surface.level_b();

    if (evaluate->parsed()) {
      report.command = "evaluate";
      for (double x : uniform_levels(b, points)) {
        for (Phase p : {Phase::High, Phase::Low}) report.points.push_back({x, p, surface.at(p, x), {}});
      }
    } else if (verify->parsed()) {
      report.command = "verify";
      report.verification = VerificationSummary::from(verify_strategy(model, surface, vopt));
    } else {
      std::ostringstream csv;
      csv << "x,side,V1,V2,H1,H2,S1,S2,K1,K2,H0b,S0b,K0b,V0b\n";
      const CostParts lb = surface.level_b();
      const std::string tail =
          num(lb.holding) + "," + num(lb.shortage) + "," + num(lb.switching) + "," + num(lb.total());
      auto row = [&](double x, Side side, const char* name) {
        const CostParts one = surface.at(Phase::High, x, side);
        const CostParts two = surface.at(Phase::Low, x, side);
        csv << num(x) << ',' << name << ',' << num(one.total()) << ',' << num(two.total()) << ','
            << num(one.holding) << ',' << num(two.holding) << ',' << num(one.shortage) << ','
            << num(two.shortage) << ',' << num(one.switching) << ',' << num(two.switching) << ','
            << tail << '\n';
      };
      const auto th = st.thresholds();
      auto xs = uniform_levels(b, points - 1);
      xs.push_back(b);
      std::size_t next = 0;
      for (double x : xs) {
        for (; next < th.size() && th[next] <= x; ++next) {
          if (th[next] > 0.0) {
            row(th[next], Side::Left, "left");
            row(th[next], Side::Right, "right");
          } else {
            row(th[next], Side::Natural, "natural");
          }
        }
        if (std::find(th.begin(), th.end(), x) != th.end()) continue;
        row(x, x == b ? Side::Left : Side::Natural, x == b ? "left" : "natural");
      }
      emit(common, csv.str(), out);
      return kOk;
    }
    report.timing_seconds = seconds_since(t0);
    emit(common, report, out);
    return kOk;
  } catch (const Error& e) {
    err << "bandctl: " << e.what() << "\n";
    return is_validation_error(e.code()) ? kValidation : kNumeric;
  } catch (const std::exception& e) {
    err << "bandctl: " << e.what() << "\n";
    return kNumeric;
  }
}

}  // namespace bandctl::cli
