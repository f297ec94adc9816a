// SPDX-License-Identifier: Apache-2.0

#include "cteaoa/geometry.hpp"

#include <cmath>
#include <string>

#include "cteaoa/angles.hpp"
#include "cteaoa/errors.hpp"

namespace cteaoa {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

ArrayGeometry::ArrayGeometry(int antenna_count, double radius_mm, double orientation_offset_deg)
    : antenna_count_(antenna_count),
      radius_mm_(radius_mm),
      orientation_offset_deg_(orientation_offset_deg) {
    if (antenna_count < 3) {
        throw ConfigError("geometry: antenna_count must be >= 3, got " +
                          std::to_string(antenna_count));
    }
    if (!(radius_mm > 0.0) || !std::isfinite(radius_mm)) {
        throw ConfigError("geometry: radius must be > 0 mm");
    }
    if (!std::isfinite(orientation_offset_deg)) {
        throw ConfigError("geometry: orientation offset must be finite");
    }
}

double ArrayGeometry::antenna_angle_deg(int index) const {
    return orientation_offset_deg_ + (index - 1) * step_deg();
}

double ArrayGeometry::pair_axis_deg(int first_index) const {
    return antenna_angle_deg(first_index) + 0.5 * step_deg();
}

double ArrayGeometry::chord_mm() const {
    return 2.0 * radius_mm_ * std::sin(0.5 * step_deg() * kRadPerDeg);
}

void validate(const ArrayGeometry& geom, const CarrierModel& carrier) {
    if (!(carrier.frequency_hz > 0.0) || !(carrier.propagation_speed > 0.0)) {
        throw ConfigError("carrier: frequency and propagation speed must be > 0");
    }
    if (!(carrier.wavelength_mm() > 2.0 * geom.chord_mm())) {
        throw ConfigError("carrier: wavelength " + std::to_string(carrier.wavelength_mm()) +
                          " mm must exceed twice the adjacent chord " +
                          std::to_string(geom.chord_mm()) + " mm");
    }
}

std::vector<Point2> antenna_positions(const ArrayGeometry& geom) {
    std::vector<Point2> out;
    out.reserve(static_cast<std::size_t>(geom.antenna_count()));
    for (int k = 1; k <= geom.antenna_count(); ++k) {
        const double a = geom.antenna_angle_deg(k) * kRadPerDeg;
        out.push_back({geom.radius_mm() * std::cos(a), -geom.radius_mm() * std::sin(a)});
    }
    return out;
}

Point2 propagation_direction(double aoa_deg) {
    const double a = aoa_deg * kRadPerDeg;
    return {std::cos(a), -std::sin(a)};
}

double spatial_phase(const ArrayGeometry& geom, const CarrierModel& carrier, double aoa_deg,
                     int index) {
    const double a = geom.antenna_angle_deg(index) * kRadPerDeg;
    const Point2 u = propagation_direction(aoa_deg);
    const double projection = geom.radius_mm() * (std::cos(a) * u.x - std::sin(a) * u.y);
    return 360.0 / carrier.wavelength_mm() * projection;
}

std::vector<double> expected_profile(const ArrayGeometry& geom, const CarrierModel& carrier,
                                     double aoa_deg) {
    const int n = geom.antenna_count();
    std::vector<double> phase(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        phase[static_cast<std::size_t>(k - 1)] = spatial_phase(geom, carrier, aoa_deg, k);
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) {
        const auto next = static_cast<std::size_t>((p + 1) % n);
        out[static_cast<std::size_t>(p)] = wrap180(phase[static_cast<std::size_t>(p)] - phase[next]);
    }
    return out;
}

double profile_amplitude_deg(const ArrayGeometry& geom, const CarrierModel& carrier) {
    return 360.0 * geom.chord_mm() / carrier.wavelength_mm();
}

}  // namespace cteaoa
