#pragma once

#include <cmath>
#include <numbers>

namespace bkiexp {

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

/// A candidate sensing configuration in SE(2).
struct Action {
  double x_m = 0.0;
  double y_m = 0.0;
  double heading_rad = 0.0;

  Action() = default;
  Action(double x, double y, double heading) : x_m(x), y_m(y), heading_rad(wrap_angle(heading)) {}

  friend bool operator==(const Action&, const Action&) = default;
};

}  // namespace bkiexp
