// SPDX-License-Identifier: MIT
#include "bandctl/cost_one.hpp"

#include "bandctl/errors.hpp"
#include "engine.hpp"

namespace bandctl {
namespace {

void require_in(double x, double lo, double hi, const char* what) {
  const double slack = 1e-10 * std::max(1.0, std::abs(hi));
  if (!(x >= lo - slack && x <= hi + slack)) {
    throw Error(ErrorCode::OutOfBand, std::string(what) + ": x=" + std::to_string(x));
  }
}

std::shared_ptr<const detail::TypeOneEngine> make_engine(const ValidatedModel& model,
                                                         const BandOne& band,
                                                         const EngineOptions& opt) {
  return std::make_shared<const detail::TypeOneEngine>(model, band, opt);
}

template <class Pick>
ComponentProfile profile(std::shared_ptr<const detail::TypeOneEngine> e, Pick pick) {
  ComponentProfile p;
  const double level = pick(e->level_b());
  p.level_b = level;
  p.phase1 = [e, pick](double x) {
    require_in(x, 0.0, e->band().y1, "phase-1 profile");
    return pick(e->resolve(e->native_high(x)));
  };
  p.phase2 = [e, pick](double x) {
    require_in(x, e->band().y2, e->config().b, "phase-2 profile");
    return pick(e->resolve(e->native_low(x)));
  };
  return p;
}

}  // namespace

double holding_exit_two_sided(const ValidatedModel& model, const BandOne& band, double x) {
  require_in(x, band.y2, model->b, "holding_exit_two_sided");
  return make_engine(model, band, {})->holding_low_local(x);
}

double holding_reflected(const ValidatedModel& model, const BandOne& band, double x) {
  require_in(x, 0.0, band.y1, "holding_reflected");
  return make_engine(model, band, {})->holding_high_local(x);
}

double shortage_reflected(const ValidatedModel& model, const BandOne& band, double x) {
  require_in(x, 0.0, band.y1, "shortage_reflected");
  return make_engine(model, band, {})->shortage_high_local(x);
}

ComponentProfile holding_assemble(const ValidatedModel& model, const BandOne& band,
                                  const EngineOptions& opt) {
  return profile(make_engine(model, band, opt), [](const CostParts& c) { return c.holding; });
}

ComponentProfile shortage_assemble(const ValidatedModel& model, const BandOne& band,
                                   const EngineOptions& opt) {
  return profile(make_engine(model, band, opt), [](const CostParts& c) { return c.shortage; });
}

ComponentProfile switching_assemble(const ValidatedModel& model, const BandOne& band,
                                    const EngineOptions& opt) {
  return profile(make_engine(model, band, opt), [](const CostParts& c) { return c.switching; });
}

CostSurface total_cost(const ValidatedModel& model, const BandOne& band, const EngineOptions& opt) {
  return CostSurface(make_engine(model, band, opt));
}

double level_b_objective(const ValidatedModel& model, const BandOne& band,
                         const EngineOptions& opt) {
  return detail::TypeOneEngine(model, band, opt).level_b().total();
}

}  // namespace bandctl
