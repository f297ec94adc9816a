// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>
#include <optional>
#include <span>

namespace cteaoa {

inline constexpr double kDegPerRad = 180.0 / std::numbers::pi;
inline constexpr double kRadPerDeg = std::numbers::pi / 180.0;

/// mod(x + 180, 360) - 180 with a floored modulus; result in [-180, 180).
double wrap180(double deg);

/// Result in [0, 360).
double wrap360(double deg);

/// Signed shortest angular distance a - b, in [-180, 180).
inline double angle_diff(double a, double b) { return wrap180(a - b); }

/// Direction of the summed unit vectors. Empty when the resultant length
/// falls below `min_resultant` (fully cancelling inputs).
std::optional<double> circular_mean(std::span<const double> deg, double min_resultant = 1e-9);

/// Mean resultant length R in [0, 1].
double mean_resultant_length(std::span<const double> deg);

/// sqrt(-2 ln R), in degrees.
double circular_std(std::span<const double> deg);

/// Root mean square of wrap180(a[i] - b[i]).
double rms_circular_distance(std::span<const double> a, std::span<const double> b);

}  // namespace cteaoa
