// SPDX-License-Identifier: MIT
#include "bandctl/cost_two.hpp"

#include "bandctl/errors.hpp"
#include "engine.hpp"

namespace bandctl {

double holding_exit_phase1(const ValidatedModel& model, const BandTwo& band, double x) {
  check_band(band, model->b);
  if (!(x >= band.y4 && x <= model->b)) {
    throw Error(ErrorCode::OutOfBand, "holding_exit_phase1 needs y4 <= x <= b");
  }
  auto base = std::make_shared<const detail::TypeOneEngine>(model, band.lower(), EngineOptions{});
  return detail::TypeTwoEngine(base, band.y4).holding_upper_local(x);
}

CostParts upper_phase1_costs(const ValidatedModel& model, const BandTwo& band,
                             const CostSurface& type_one, double x, const EngineOptions& opt) {
  const auto& st = type_one.strategy();
  if (st.y4 || st.y2 != band.y2 || st.y3 != band.y3 || st.y1 != band.y1) {
    throw Error(ErrorCode::InvalidBand, "type-one surface does not match the lower band");
  }
  if (!(x > band.y4 && x < model->b)) {
    throw Error(ErrorCode::OutOfBand, "upper_phase1_costs needs y4 < x < b");
  }
  // The overlay needs the scale sets, so it rebuilds a type-one engine and
  // checks it against the supplied surface at capacity.
  auto base = std::make_shared<const detail::TypeOneEngine>(model, band.lower(), opt);
  const double gap = std::abs(base->level_b().total() - type_one.objective());
  if (gap > 1e-9 * std::max(1.0, std::abs(type_one.objective()))) {
    throw Error(ErrorCode::InvalidBand, "type-one surface was built for a different model");
  }
  return detail::TypeTwoEngine(base, band.y4).upper(x);
}

CostSurface total_cost_two(const ValidatedModel& model, const BandTwo& band,
                           const EngineOptions& opt) {
  check_band(band, model->b);
  auto base = std::make_shared<const detail::TypeOneEngine>(model, band.lower(), opt);
  return CostSurface(std::make_shared<const detail::TypeTwoEngine>(base, band.y4));
}

}  // namespace bandctl
