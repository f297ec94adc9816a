// SPDX-License-Identifier: Apache-2.0

#include "cteaoa/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cteaoa/angles.hpp"
#include "cteaoa/errors.hpp"

namespace cteaoa {

namespace {

class PhaseSampler {
  public:
    PhaseSampler(const SamplingConfig& cfg, const NoiseModel& noise)
        : cfg_(cfg), noise_(noise), rng_(noise.seed), gauss_(0.0, 1.0), uniform_(-1.0, 1.0) {}

    std::int16_t sample(double clean_deg, bool corruptible) {
        double phase = clean_deg;
        if (noise_.sigma_deg > 0.0) {
            phase += noise_.sigma_deg * gauss_(rng_);
        }
        if (corruptible && noise_.transient_corruption) {
            phase += noise_.corruption_deg * uniform_(rng_);
        }
        return to_fixed_point(wrap180(phase), cfg_.fixed_point_halfscale);
    }

  private:
    const SamplingConfig& cfg_;
    const NoiseModel& noise_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_;
    std::uniform_real_distribution<double> uniform_;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

PacketSamples simulate_packet(const ArrayGeometry& geom, const CarrierModel& carrier,
                              const SamplingConfig& cfg, double aoa_deg, const NoiseModel& noise,
                              double initial_phase_deg) {
    validate(geom, carrier);
    cfg.validate(geom);
    if (!(noise.sigma_deg >= 0.0) || !(noise.corruption_deg >= 0.0)) {
        throw ConfigError("noise: sigma and corruption magnitude must be >= 0");
    }

    const int n = geom.antenna_count();
    std::vector<double> spatial(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        spatial[static_cast<std::size_t>(k - 1)] = spatial_phase(geom, carrier, aoa_deg, k);
    }

    const double period_us = cfg.sample_period_ns / 1000.0;
    const int sps = cfg.samples_per_slot();
    PhaseSampler sampler(cfg, noise);

    PacketSamples pkt;
    pkt.meta.true_aoa_deg = aoa_deg;

    const int nref = cfg.reference_samples();
    pkt.reference.reserve(static_cast<std::size_t>(nref));
    for (int m = 0; m < nref; ++m) {
        const double t = -cfg.reference_us + m * period_us;
        pkt.reference.push_back(
            sampler.sample(initial_phase_deg + cfg.tone_rate_deg_per_us * t + spatial[0], false));
    }

    pkt.antenna_sequence = circular_antenna_sequence(n, cfg.switched_slots);
    pkt.slots.resize(static_cast<std::size_t>(cfg.switched_slots));
    for (int i = 0; i < cfg.switched_slots; ++i) {
        const int antenna = pkt.antenna_sequence[static_cast<std::size_t>(i)];
        auto& slot = pkt.slots[static_cast<std::size_t>(i)];
        slot.reserve(static_cast<std::size_t>(sps));
        for (int j = 0; j < sps; ++j) {
            const double t = i * cfg.slot_us + j * period_us;
            const bool retained = std::find(cfg.retained_indices.begin(), cfg.retained_indices.end(),
                                            j) != cfg.retained_indices.end();
            slot.push_back(sampler.sample(initial_phase_deg + cfg.tone_rate_deg_per_us * t +
                                              spatial[static_cast<std::size_t>(antenna - 1)],
                                          !retained));
        }
    }
    return pkt;
}

std::vector<PacketSamples> simulate_packets(const ArrayGeometry& geom, const CarrierModel& carrier,
                                            const SamplingConfig& cfg, double aoa_deg,
                                            const NoiseModel& noise, int count,
                                            const std::string& transmitter) {
    std::vector<PacketSamples> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) {
        NoiseModel packet_noise = noise;
        packet_noise.seed = derive_seed(noise.seed, static_cast<std::uint64_t>(i));
        std::mt19937_64 phase_rng(derive_seed(packet_noise.seed, 0xC7E));
        const double initial =
            std::uniform_real_distribution<double>(-180.0, 180.0)(phase_rng);
        auto pkt = simulate_packet(geom, carrier, cfg, aoa_deg, packet_noise, initial);
        pkt.meta.counter = i;
        pkt.meta.transmitter = transmitter;
        out.push_back(std::move(pkt));
    }
    return out;
}

}  // namespace cteaoa
