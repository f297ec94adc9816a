// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "cteaoa/geometry.hpp"
#include "cteaoa/pipeline.hpp"
#include "cteaoa/sampling.hpp"
#include "cteaoa/simulator.hpp"

namespace cteaoa {

struct NoiseSweepRow {
    double sigma_deg = 0.0;
    int trials = 0;
    int degenerate = 0;  // trials whose fold cancelled; excluded from the statistics
    double mean_rms_deg = 0.0;  // mean over trials of the RMS folded-profile deviation
    double std_rms_deg = 0.0;
    std::vector<double> first_profile;  // folded profile of trial 0
};

/// Profile degradation under Gaussian phase noise. Trial t uses the packet
/// seed derive_seed(noise.seed, t) for every sigma, so rows share random
/// numbers and differ only in noise scale.
std::vector<NoiseSweepRow> sweep_noise(const ArrayGeometry& geom, const CarrierModel& carrier,
                                       const SamplingConfig& cfg, const NoiseModel& noise,
                                       std::span<const double> sigmas, int trials, double aoa_deg,
                                       MeanKind mean = MeanKind::circular);

}  // namespace cteaoa
