// SPDX-License-Identifier: MIT
#include "bandctl/strategy.hpp"

#include <algorithm>
#include <cmath>

#include "bandctl/errors.hpp"

namespace bandctl {

std::string_view to_string(StrategyKind kind) noexcept {
  switch (kind) {
    case StrategyKind::Doshi: return "doshi";
    case StrategyKind::TypeOne: return "one";
    case StrategyKind::TypeTwo: return "two";
  }
  return "unknown";
}

void check_band(const BandOne& s, double b) {
  const bool finite = std::isfinite(s.y2) && std::isfinite(s.y3) && std::isfinite(s.y1);
  if (!finite || !(s.y2 >= 0.0 && s.y2 <= s.y3 && s.y3 + kMinGap <= s.y1 && s.y1 < b)) {
    throw Error(ErrorCode::InvalidBand, "need 0 <= y2 <= y3 < y1 < b, got y2=" +
                                            std::to_string(s.y2) + " y3=" + std::to_string(s.y3) +
                                            " y1=" + std::to_string(s.y1));
  }
}

void check_band(const BandTwo& s, double b) {
  check_band(s.lower(), b);
  if (!std::isfinite(s.y4) || !(s.y4 > s.y1 && s.y4 < b)) {
    throw Error(ErrorCode::InvalidBand, "need y1 < y4 < b, got y4=" + std::to_string(s.y4));
  }
}

BandStrategy BandStrategy::from(const BandOne& band) {
  BandStrategy s;
  s.kind = band.y3 == band.y2 ? StrategyKind::Doshi : StrategyKind::TypeOne;
  s.y2 = band.y2;
  s.y3 = band.y3;
  s.y1 = band.y1;
  return s;
}

BandStrategy BandStrategy::from(const BandTwo& band) {
  BandStrategy s;
  s.kind = StrategyKind::TypeTwo;
  s.y2 = band.y2;
  s.y3 = band.y3;
  s.y1 = band.y1;
  s.y4 = band.y4;
  return s;
}

bool BandStrategy::switches_high_to_low(double x) const noexcept {
  if (y4) return x >= y1 && x <= *y4;
  return x >= y1;
}

bool BandStrategy::switches_low_to_high(double x) const noexcept { return x <= y2; }

bool BandStrategy::restarts_high(double x) const noexcept { return x <= y2 || x < y3; }

std::vector<double> BandStrategy::thresholds() const {
  std::vector<double> t{y2, y3, y1};
  if (y4) t.push_back(*y4);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

}  // namespace bandctl
