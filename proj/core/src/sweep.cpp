// SPDX-License-Identifier: Apache-2.0

#include "cteaoa/sweep.hpp"

#include <cmath>

#include "cteaoa/angles.hpp"
#include "cteaoa/errors.hpp"

namespace cteaoa {

std::vector<NoiseSweepRow> sweep_noise(const ArrayGeometry& geom, const CarrierModel& carrier,
                                       const SamplingConfig& cfg, const NoiseModel& noise,
                                       std::span<const double> sigmas, int trials, double aoa_deg,
                                       MeanKind mean) {
    if (trials < 1) {
        throw ConfigError("sweep_noise: trials must be >= 1");
    }
    const auto model = expected_profile(geom, carrier, aoa_deg);
    std::vector<NoiseSweepRow> rows;
    for (double sigma : sigmas) {
        NoiseSweepRow row;
        row.sigma_deg = sigma;
        row.trials = trials;
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int t = 0; t < trials; ++t) {
            NoiseModel n = noise;
            n.sigma_deg = sigma;
            n.seed = derive_seed(noise.seed, static_cast<std::uint64_t>(t));
            const auto pkt = simulate_packets(geom, carrier, cfg, aoa_deg, n, 1).front();
            DiffProfile folded;
            try {
                folded = process_packet(pkt, cfg, geom.antenna_count(), mean).folded;
            } catch (const DegenerateError&) {
                ++row.degenerate;
                continue;
            }
            const double rms = rms_circular_distance(folded.values, model);
            sum += rms;
            sum_sq += rms * rms;
            if (row.first_profile.empty()) {
                row.first_profile = folded.values;
            }
        }
        const int used = trials - row.degenerate;
        if (used == 0) {
            throw DegenerateError("sweep_noise: every trial degenerated");
        }
        row.mean_rms_deg = sum / used;
        const double var = sum_sq / used - row.mean_rms_deg * row.mean_rms_deg;
        row.std_rms_deg = std::sqrt(std::max(0.0, var));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace cteaoa
