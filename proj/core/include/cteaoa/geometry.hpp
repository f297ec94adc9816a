// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace cteaoa {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(Point2 a, Point2 b);

/// Uniform circular array. Antennas are numbered 1..count clockwise starting
/// at `orientation_offset_deg` from the board's 0 degree axis.
///
/// The board frame has x along the 0 degree axis and y such that a clockwise
/// rotation by 90 degrees maps +x onto -y, i.e. antenna 3 of an 8-element
/// array sits at (0, -r).
class ArrayGeometry {
  public:
    ArrayGeometry() = default;
    /// Throws ConfigError if count < 3 or radius <= 0.
    ArrayGeometry(int antenna_count, double radius_mm, double orientation_offset_deg = 0.0);

    int antenna_count() const { return antenna_count_; }
    double radius_mm() const { return radius_mm_; }
    double orientation_offset_deg() const { return orientation_offset_deg_; }

    /// Inter-antenna angular step, 360 / count.
    double step_deg() const { return 360.0 / antenna_count_; }

    /// Clockwise angular placement of antenna `index` (1-based).
    double antenna_angle_deg(int index) const;

    /// Angle of the chord midpoint between antenna n and n+1 (1-based, ring
    /// wrapped). The adjacent-pair phase difference is a sinusoid in this.
    double pair_axis_deg(int first_index) const;

    /// Chord between adjacent antennas, 2 r sin(180 / count).
    double chord_mm() const;

  private:
    int antenna_count_ = 8;
    double radius_mm_ = 65.0;
    double orientation_offset_deg_ = 0.0;
};

struct CarrierModel {
    static constexpr double kSpeedOfLight = 299'792'458.0;

    double frequency_hz = 2.402e9;
    double propagation_speed = kSpeedOfLight;

    double wavelength_mm() const { return propagation_speed / frequency_hz * 1000.0; }
};

/// Throws ConfigError when the carrier is non-physical or adjacent pairs
/// alias spatially (wavelength <= 2 * chord).
void validate(const ArrayGeometry& geom, const CarrierModel& carrier);

/// Positions in millimetres, clockwise from antenna 1, centred on the origin.
std::vector<Point2> antenna_positions(const ArrayGeometry& geom);

/// Unit propagation direction of a plane wave whose azimuth is `aoa_deg`
/// (clockwise, board frame).
Point2 propagation_direction(double aoa_deg);

/// Phase of antenna `index` (1-based) relative to the board centre, in
/// degrees, unwrapped: 360 / lambda * <position, propagation direction>.
double spatial_phase(const ArrayGeometry& geom, const CarrierModel& carrier, double aoa_deg,
                     int index);

/// Folded model profile: entry n is wrap180(phase(n) - phase(n + 1)) for the
/// pairs (A1,A2), (A2,A3), ..., (AN,A1).
std::vector<double> expected_profile(const ArrayGeometry& geom, const CarrierModel& carrier,
                                     double aoa_deg);

/// Peak amplitude of the model profile, 360 * chord / lambda, in degrees.
double profile_amplitude_deg(const ArrayGeometry& geom, const CarrierModel& carrier);

}  // namespace cteaoa
