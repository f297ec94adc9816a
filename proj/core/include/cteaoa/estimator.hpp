// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "cteaoa/geometry.hpp"
#include "cteaoa/pipeline.hpp"
#include "cteaoa/sampling.hpp"

namespace cteaoa {

enum class EstimateMethod { grid, harmonic };
enum class AveragingStrategy { average_then_fit, fit_then_average };

std::string to_string(EstimateMethod m);
std::string to_string(AveragingStrategy s);
EstimateMethod parse_method(const std::string& s);
AveragingStrategy parse_strategy(const std::string& s);

struct AoAEstimate {
    double angle_deg = 0.0;     // [0, 360), propagation azimuth, clockwise
    double residual_deg = 0.0;  // RMS circular misfit against the model profile
    EstimateMethod method = EstimateMethod::grid;
    std::size_t packets = 1;
    double dispersion_deg = 0.0;  // circular std of per-packet angles
    std::vector<std::string> provenance;
};

/// RMS circular distance between `folded` and expected_profile(aoa).
double profile_residual(std::span<const double> folded, const ArrayGeometry& geom,
                        const CarrierModel& carrier, double aoa_deg);

/// Exhaustive scan of [0, 360) at `step_deg`, then golden-section refinement
/// within +/- step of the best grid point. Ties go to the smallest angle.
AoAEstimate estimate_grid(const DiffProfile& folded, const ArrayGeometry& geom,
                          const CarrierModel& carrier, double step_deg = 0.1);

/// Closed form from the first circular harmonic of the folded profile.
///
/// For a uniform circular array entry n equals A sin(psi_n - aoa), psi_n
/// being the pair-axis angle, so sum_n v_n exp(i psi_n) = (i N A / 2) exp(i aoa).
/// Throws DegenerateError if the recovered amplitude 2|Z|/N is below
/// `min_amplitude_deg`.
AoAEstimate estimate_harmonic(const DiffProfile& folded, const ArrayGeometry& geom,
                              const CarrierModel& carrier, double min_amplitude_deg = 1.0);

struct EstimatorOptions {
    EstimateMethod method = EstimateMethod::grid;
    AveragingStrategy strategy = AveragingStrategy::average_then_fit;
    double grid_step_deg = 0.1;
    MeanKind mean = MeanKind::circular;
};

AoAEstimate estimate(const DiffProfile& folded, const ArrayGeometry& geom,
                     const CarrierModel& carrier, const EstimatorOptions& opts);

/// Estimates from already-folded per-packet profiles.
AoAEstimate estimate_from_profiles(std::span<const DiffProfile> folded, const ArrayGeometry& geom,
                                   const CarrierModel& carrier, const EstimatorOptions& opts);

/// Runs the pipeline on each packet, then combines per `opts.strategy`.
AoAEstimate estimate_from_packets(std::span<const PacketSamples> packets, const ArrayGeometry& geom,
                                  const CarrierModel& carrier, const SamplingConfig& cfg,
                                  const EstimatorOptions& opts);

}  // namespace cteaoa
