// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cteaoa/geometry.hpp"

namespace cteaoa {

/// Constant-tone-extension timing and the radio's phase encoding.
///
/// The switched part of the tone is a sequence of `switched_slots` antenna
/// dwells of `slot_us` each; the first `rotations * antenna_count` of them (plus
/// one closing slot when present) feed the difference pipeline.
struct SamplingConfig {
    double cte_length_us = 160.0;
    double guard_us = 4.0;
    double reference_us = 8.0;
    double slot_us = 4.0;
    double sample_period_ns = 500.0;
    double tone_rate_deg_per_us = 90.0;
    int fixed_point_halfscale = 201;
    std::vector<int> retained_indices{1, 2, 3};
    int rotations = 4;
    int switched_slots = 36;

    int samples_per_slot() const;
    int reference_samples() const;
    int samples_per_packet() const { return reference_samples() + switched_slots * samples_per_slot(); }

    /// Slots consumed by the pipeline: rotations * antenna_count, plus the
    /// slot that closes the ring when the packet has one.
    int pipeline_slots(int antenna_count) const;

    /// Throws ConfigError naming the first violated invariant.
    void validate(const ArrayGeometry& geom) const;
};

/// Linear map [-180, 180] degrees <-> [-halfscale, +halfscale], rounding half
/// away from zero. Throws std::out_of_range outside [-180, 180].
std::int16_t to_fixed_point(double deg, int halfscale = 201);

/// Throws FormatError when |value| > halfscale.
double to_degrees(std::int16_t value, int halfscale = 201);

struct PacketMeta {
    std::string transmitter = "1";
    std::int64_t counter = 0;
    std::optional<double> true_aoa_deg;
};

/// Raw radio output for one packet.
struct PacketSamples {
    std::vector<std::int16_t> reference;
    std::vector<std::vector<std::int16_t>> slots;
    std::vector<int> antenna_sequence;  // 1-based antenna sampled in each slot
    PacketMeta meta;

    std::vector<std::int16_t> flatten() const;
};

/// Circular switching pattern 1, 2, ..., N, 1, 2, ... of length `slots`.
std::vector<int> circular_antenna_sequence(int antenna_count, int slots);

}  // namespace cteaoa
