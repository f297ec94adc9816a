// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cteaoa/estimator.hpp"
#include "cteaoa/geometry.hpp"
#include "cteaoa/locator.hpp"
#include "cteaoa/sampling.hpp"
#include "cteaoa/simulator.hpp"

namespace cteaoa {

/// Ordered "section.key" -> value pairs; the canonical text form of a config.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct LocatorConfig {
    double heading_deg = 0.0;
    double grid_step_m = 0.1;
    BearingConvention convention = BearingConvention::propagation_clockwise;
};

/// Fully resolved settings shared by every subcommand.
struct RunConfig {
    ArrayGeometry geometry{8, 65.0, 0.0};
    CarrierModel carrier;
    SamplingConfig sampling;
    NoiseModel noise;
    EstimatorOptions estimator;
    LocatorConfig locator;
    BeaconMap beacons = BeaconMap::field_square();

    /// Cross-section invariants (sampling vs geometry, carrier aliasing).
    void validate() const;
};

/// Parses the INI-style config file:
///
///   [geometry]
///   antenna_count = 8
///   radius_mm = 65
///   [beacons]
///   b2 = 0,0
///
/// Unknown sections or keys are ConfigErrors. Missing keys keep defaults; a
/// [beacons] section replaces the default map entirely.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Applies `section.key=value` pairs on top of `base`. With
/// `ignore_unknown`, keys outside the config sections are skipped.
RunConfig apply_key_values(RunConfig base, const KeyValues& kv, bool ignore_unknown = false);

KeyValues to_key_values(const RunConfig& cfg);

/// FNV-1a 64 over the canonical "key=value\n" lines, as 16 hex digits.
std::string config_hash(const KeyValues& kv);
inline std::string config_hash(const RunConfig& cfg) { return config_hash(to_key_values(cfg)); }

}  // namespace cteaoa
