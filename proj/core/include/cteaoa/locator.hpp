// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cteaoa/estimator.hpp"
#include "cteaoa/geometry.hpp"

namespace cteaoa {

struct Beacon {
    std::string id;
    Point2 position;  // metres, world frame
};

struct AreaBounds {
    Point2 min;
    Point2 max;
};

/// Known transmitter layout. Bounds default to the beacons' bounding box.
class BeaconMap {
  public:
    BeaconMap() = default;
    /// Throws ConfigError for fewer than two beacons, duplicate ids or
    /// coincident positions.
    explicit BeaconMap(std::vector<Beacon> beacons, std::optional<AreaBounds> bounds = std::nullopt);

    /// Field layout: a 12 m square with b2 (0,0), b4 (0,12), b1 (12,12), b5 (12,0).
    static BeaconMap field_square(double side_m = 12.0);

    const std::vector<Beacon>& beacons() const { return beacons_; }
    const AreaBounds& bounds() const { return bounds_; }
    const Beacon& at(const std::string& id) const;

    BeaconMap without(const std::string& id) const;

  private:
    std::vector<Beacon> beacons_;
    AreaBounds bounds_{};
};

/// Bearings are measured counter-clockwise from the receiver's 0 axis,
/// pointing from the receiver towards the beacon. world = bearing + heading.
using Bearings = std::map<std::string, double>;

/// How an AoA estimate maps onto a receiver-frame bearing.
enum class BearingConvention {
    propagation_clockwise,  // AoA is the clockwise propagation azimuth (estimator output)
    bearing_ccw,            // AoA already is a counter-clockwise bearing to the beacon
};

double aoa_to_bearing(double aoa_deg, BearingConvention convention);

/// Exact receiver-frame bearings to every beacon, in [0, 360).
/// Throws DegenerateError when `position` coincides with a beacon.
Bearings bearings_oracle(const BeaconMap& map, Point2 position, double heading_deg);

struct PositionEstimate {
    Point2 position;
    double residual_deg = 0.0;  // RMS bearing misfit
    std::vector<std::string> beacons_used;
};

struct LocateOptions {
    double grid_step_m = 0.1;
    int max_iterations = 200;
};

/// Least-squares bearing fit: coarse grid over the map bounds, then
/// Levenberg-Marquardt with the iterate held inside the bounds. Throws ConfigError with fewer than two usable
/// bearings, DegenerateError when the fit is flat along some direction.
PositionEstimate locate(const BeaconMap& map, const Bearings& bearings, double heading_deg,
                        const LocateOptions& opts = {});

PositionEstimate locate(const BeaconMap& map, const std::map<std::string, AoAEstimate>& estimates,
                        double heading_deg, BearingConvention convention,
                        const LocateOptions& opts = {});

}  // namespace cteaoa
