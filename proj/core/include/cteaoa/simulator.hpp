// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "cteaoa/geometry.hpp"
#include "cteaoa/sampling.hpp"

namespace cteaoa {

struct NoiseModel {
    double sigma_deg = 0.0;              // zero-mean Gaussian, per sample
    bool transient_corruption = false;   // perturb non-retained sample indices
    double corruption_deg = 180.0;       // uniform in [-c, c)
    std::uint64_t seed = 1;
};

/// One packet of radio phase samples for a plane wave at `aoa_deg`.
///
/// Sample j of switched slot i on antenna k encodes
///   wrap180(initial_phase + tone_rate * t_ij + spatial_phase(k) + n_ij)
/// with t_ij = i * slot + j * sample_period measured from the start of
/// switching and n_ij ~ N(0, sigma). Reference samples are taken on antenna 1
/// during the reference period preceding t = 0. Noise is added before
/// quantization. Deterministic in (inputs, noise.seed).
PacketSamples simulate_packet(const ArrayGeometry& geom, const CarrierModel& carrier,
                              const SamplingConfig& cfg, double aoa_deg, const NoiseModel& noise,
                              double initial_phase_deg);

/// `count` packets with counters 0..count-1. Packet i uses a seed derived from
/// (noise.seed, i) and draws its initial tone phase uniformly from that
/// stream, so any packet can be regenerated on its own.
std::vector<PacketSamples> simulate_packets(const ArrayGeometry& geom, const CarrierModel& carrier,
                                            const SamplingConfig& cfg, double aoa_deg,
                                            const NoiseModel& noise, int count,
                                            const std::string& transmitter = "1");

/// SplitMix64 mix of (seed, stream) for independent per-packet/per-trial seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace cteaoa
