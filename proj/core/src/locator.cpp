// SPDX-License-Identifier: Apache-2.0

#include "cteaoa/locator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <set>

#include "cteaoa/angles.hpp"
#include "cteaoa/errors.hpp"

namespace cteaoa {

BeaconMap::BeaconMap(std::vector<Beacon> beacons, std::optional<AreaBounds> bounds)
    : beacons_(std::move(beacons)) {
    if (beacons_.size() < 2) {
        throw ConfigError("beacon map: need at least two beacons");
    }
    std::set<std::string> ids;
    for (std::size_t i = 0; i < beacons_.size(); ++i) {
        if (!ids.insert(beacons_[i].id).second) {
            throw ConfigError("beacon map: duplicate id '" + beacons_[i].id + "'");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (distance(beacons_[i].position, beacons_[j].position) < 1e-12) {
                throw ConfigError(fmt::format("beacon map: '{}' and '{}' share a position",
                                              beacons_[i].id, beacons_[j].id));
            }
        }
    }
    if (bounds) {
        bounds_ = *bounds;
    } else {
        bounds_.min = bounds_.max = beacons_.front().position;
        for (const auto& b : beacons_) {
            bounds_.min.x = std::min(bounds_.min.x, b.position.x);
            bounds_.min.y = std::min(bounds_.min.y, b.position.y);
            bounds_.max.x = std::max(bounds_.max.x, b.position.x);
            bounds_.max.y = std::max(bounds_.max.y, b.position.y);
        }
    }
    if (!(bounds_.max.x >= bounds_.min.x) || !(bounds_.max.y >= bounds_.min.y)) {
        throw ConfigError("beacon map: empty area bounds");
    }
}

BeaconMap BeaconMap::field_square(double side_m) {
    return BeaconMap({{"b2", {0.0, 0.0}},
                      {"b4", {0.0, side_m}},
                      {"b1", {side_m, side_m}},
                      {"b5", {side_m, 0.0}}});
}

const Beacon& BeaconMap::at(const std::string& id) const {
    for (const auto& b : beacons_) {
        if (b.id == id) {
            return b;
        }
    }
    throw ConfigError("beacon map: unknown beacon '" + id + "'");
}

BeaconMap BeaconMap::without(const std::string& id) const {
    std::vector<Beacon> rest;
    for (const auto& b : beacons_) {
        if (b.id != id) {
            rest.push_back(b);
        }
    }
    return BeaconMap(std::move(rest), bounds_);
}

double aoa_to_bearing(double aoa_deg, BearingConvention convention) {
    switch (convention) {
        case BearingConvention::propagation_clockwise:
            // reverse the propagation direction, then flip handedness
            return wrap360(180.0 - aoa_deg);
        case BearingConvention::bearing_ccw:
            return wrap360(aoa_deg);
    }
    return aoa_deg;
}

Bearings bearings_oracle(const BeaconMap& map, Point2 position, double heading_deg) {
    Bearings out;
    for (const auto& b : map.beacons()) {
        const double dx = b.position.x - position.x;
        const double dy = b.position.y - position.y;
        if (std::hypot(dx, dy) < 1e-12) {
            throw DegenerateError("bearings_oracle: receiver coincides with beacon '" + b.id + "'");
        }
        out[b.id] = wrap360(std::atan2(dy, dx) * kDegPerRad - heading_deg);
    }
    return out;
}

namespace {

struct Sighting {
    Point2 beacon;
    double world_deg;
};

constexpr double kCoincident = 1e-9;

double cost(const std::vector<Sighting>& s, Point2 p) {
    double acc = 0.0;
    for (const auto& v : s) {
        const double dx = v.beacon.x - p.x;
        const double dy = v.beacon.y - p.y;
        if (std::hypot(dx, dy) < kCoincident) {
            continue;
        }
        const double r = wrap180(v.world_deg - std::atan2(dy, dx) * kDegPerRad);
        acc += r * r;
    }
    return acc;
}

// J^T J and J^T r of the bearing residuals (degrees) with respect to position.
struct Normal {
    std::array<double, 3> jtj{};  // xx, xy, yy
    std::array<double, 2> jtr{};
};

Normal normal_equations(const std::vector<Sighting>& s, Point2 p) {
    Normal n;
    for (const auto& v : s) {
        const double dx = v.beacon.x - p.x;
        const double dy = v.beacon.y - p.y;
        const double d2 = dx * dx + dy * dy;
        if (std::sqrt(d2) < kCoincident) {
            continue;
        }
        const double r = wrap180(v.world_deg - std::atan2(dy, dx) * kDegPerRad);
        // residual = measured - atan2(dy, dx); d atan2 / d px = dy / d2, / d py = -dx / d2
        const double jx = -dy / d2 * kDegPerRad;
        const double jy = dx / d2 * kDegPerRad;
        n.jtj[0] += jx * jx;
        n.jtj[1] += jx * jy;
        n.jtj[2] += jy * jy;
        n.jtr[0] += jx * r;
        n.jtr[1] += jy * r;
    }
    return n;
}

}  // namespace

PositionEstimate locate(const BeaconMap& map, const Bearings& bearings, double heading_deg,
                        const LocateOptions& opts) {
    if (!(opts.grid_step_m > 0.0)) {
        throw ConfigError("locate: grid step must be > 0");
    }
    std::vector<Sighting> sightings;
    PositionEstimate out;
    for (const auto& [id, bearing] : bearings) {
        sightings.push_back({map.at(id).position, bearing + heading_deg});
        out.beacons_used.push_back(id);
    }
    if (sightings.size() < 2) {
        throw ConfigError(fmt::format("locate: need bearings from >= 2 beacons, got {}",
                                      sightings.size()));
    }

    const auto& area = map.bounds();
    const auto nx = static_cast<long>(std::floor((area.max.x - area.min.x) / opts.grid_step_m + 1e-9));
    const auto ny = static_cast<long>(std::floor((area.max.y - area.min.y) / opts.grid_step_m + 1e-9));
    Point2 best = area.min;
    double best_cost = cost(sightings, best);
    for (long i = 0; i <= nx; ++i) {
        for (long j = 0; j <= ny; ++j) {
            const Point2 p{area.min.x + static_cast<double>(i) * opts.grid_step_m,
                           area.min.y + static_cast<double>(j) * opts.grid_step_m};
            const double c = cost(sightings, p);
            if (c < best_cost) {
                best_cost = c;
                best = p;
            }
        }
    }

    // Levenberg-Marquardt from the best cell
    Point2 p = best;
    double c = best_cost;
    double lambda = 1e-3;
    for (int it = 0; it < opts.max_iterations; ++it) {
        const Normal n = normal_equations(sightings, p);
        const double a = n.jtj[0] * (1.0 + lambda);
        const double b = n.jtj[1];
        const double d = n.jtj[2] * (1.0 + lambda);
        const double det = a * d - b * b;
        if (!(std::abs(det) > 0.0)) {
            break;
        }
        // residual r = measured - model, J = d(model)/dp with sign folded in above
        const double sx = (d * n.jtr[0] - b * n.jtr[1]) / det;
        const double sy = (a * n.jtr[1] - b * n.jtr[0]) / det;
        const Point2 trial{std::clamp(p.x - sx, area.min.x, area.max.x),
                           std::clamp(p.y - sy, area.min.y, area.max.y)};
        const double tc = cost(sightings, trial);
        if (tc < c) {
            const double step = distance(trial, p);
            p = trial;
            c = tc;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (step < 1e-12) {
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) {
                break;
            }
        }
    }

    const Normal n = normal_equations(sightings, p);
    const double tr = n.jtj[0] + n.jtj[2];
    const double det = n.jtj[0] * n.jtj[2] - n.jtj[1] * n.jtj[1];
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    const double eig_max = 0.5 * tr + disc;
    const double eig_min = 0.5 * tr - disc;
    if (!(eig_max > 0.0) || eig_min <= 1e-10 * eig_max) {
        throw DegenerateError(fmt::format(
            "locate: bearing fit is flat at ({:.3f}, {:.3f}); beacons collinear with the receiver",
            p.x, p.y));
    }

    out.position = p;
    out.residual_deg = std::sqrt(c / static_cast<double>(sightings.size()));
    return out;
}

PositionEstimate locate(const BeaconMap& map, const std::map<std::string, AoAEstimate>& estimates,
                        double heading_deg, BearingConvention convention,
                        const LocateOptions& opts) {
    Bearings bearings;
    for (const auto& [id, est] : estimates) {
        bearings[id] = aoa_to_bearing(est.angle_deg, convention);
    }
    return locate(map, bearings, heading_deg, opts);
}

}  // namespace cteaoa
