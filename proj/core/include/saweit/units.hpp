#pragma once

#include <numbers>

namespace saweit {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Everything inside the library is in angular units (rad/s). Files and the
// command line speak Hz; these two functions are the only place the factor
// 2*pi enters.
constexpr double hz_to_angular(double hz) { return kTwoPi * hz; }
constexpr double angular_to_hz(double omega) { return omega / kTwoPi; }

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace saweit
