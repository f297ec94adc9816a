// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "cteaoa/sampling.hpp"

namespace cteaoa {

/// Retained samples per slot, in degrees, with the antenna sampled in each slot.
struct PhaseSeries {
    std::vector<std::vector<double>> slots;
    std::vector<int> antennas;
};

enum class ProfileKind { raw, folded };

/// Adjacent-pair phase differences in degrees, each in [-180, 180).
///
/// `pairs[n]` is the 1-based antenna that opens pair n; the pair is
/// (pairs[n], pairs[n] + 1) on the ring. Raw profiles follow the switching
/// order across all rotations, folded profiles hold one entry per pair.
struct DiffProfile {
    std::vector<double> values;
    std::vector<int> pairs;
    ProfileKind kind = ProfileKind::raw;
    std::vector<std::string> provenance;

    std::size_t size() const { return values.size(); }
};

enum class MeanKind {
    circular,    // direction of summed unit vectors
    arithmetic,  // plain mean, no seam handling
};

/// Decodes the first `cfg.pipeline_slots()` switched slots of a packet,
/// keeping only the retained sample indices. Reference samples are ignored.
PhaseSeries decode_series(const PacketSamples& packet, const SamplingConfig& cfg,
                          int antenna_count);

/// Per slot, scans left to right and adds 360 to the remainder of the slot
/// whenever a sample drops more than 180 below its predecessor.
/// Throws ConfigError for slots with fewer than two samples.
PhaseSeries unwrap(PhaseSeries series);

/// Entry i-1 = wrap180(mean_j(slot[i-1][j] - slot[i][j])) for i = 1..slots-1.
/// Throws ConfigError on fewer than two slots or mismatched sample counts.
DiffProfile phase_diffs(const PhaseSeries& series);

/// Averages the raw entries of each pair over rotations. Pairs that appear
/// fewer times (an open final rotation) simply get fewer contributions.
/// Throws DegenerateError when a pair is missing or its vectors cancel.
DiffProfile fold_rotations(const DiffProfile& raw, int antenna_count,
                           MeanKind mean = MeanKind::circular);

/// Index-wise mean across packets. Throws ConfigError on empty input or
/// mismatched shapes, DegenerateError on cancellation.
DiffProfile average_profiles(std::span<const DiffProfile> profiles,
                             MeanKind mean = MeanKind::circular);

/// Divides by max |value|. Throws DegenerateError for an all-zero profile.
DiffProfile normalize_profile(const DiffProfile& profile);

struct ProcessedPacket {
    DiffProfile raw;
    DiffProfile folded;
};

/// decode -> unwrap -> phase_diffs -> fold_rotations.
ProcessedPacket process_packet(const PacketSamples& packet, const SamplingConfig& cfg,
                               int antenna_count, MeanKind mean = MeanKind::circular);

std::string packet_id(const PacketSamples& packet);

}  // namespace cteaoa
