#pragma once

#include <cmath>
#include <cstdint>

namespace lfmv {

/// Weight below which e^{-m/Y} is dropped: roughly the double-precision floor.
inline constexpr double kSmoothingWeightFloor = 1e-18;

/// (Y/2)(log Y)^2: the head/tail split of the smoothed log-derivative series.
inline double head_boundary(double Y) {
  const double l = std::log(Y);
  return 0.5 * Y * l * l;
}

/// Largest m with e^{-m/Y} >= kSmoothingWeightFloor.
inline std::uint64_t hard_truncation(double Y) {
  return static_cast<std::uint64_t>(std::floor(Y * -std::log(kSmoothingWeightFloor)));
}

}  // namespace lfmv
