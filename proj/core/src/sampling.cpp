// SPDX-License-Identifier: Apache-2.0

#include "cteaoa/sampling.hpp"

#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

#include "cteaoa/errors.hpp"

namespace cteaoa {

namespace {

bool is_integral(double v) { return std::abs(v - std::round(v)) < 1e-9; }

}  // namespace

int SamplingConfig::samples_per_slot() const {
    return static_cast<int>(std::lround(slot_us * 1000.0 / sample_period_ns));
}

int SamplingConfig::reference_samples() const {
    return static_cast<int>(std::lround(reference_us * 1000.0 / sample_period_ns));
}

int SamplingConfig::pipeline_slots(int antenna_count) const {
    const int full = rotations * antenna_count;
    return switched_slots > full ? full + 1 : full;
}

void SamplingConfig::validate(const ArrayGeometry& geom) const {
    auto fail = [](const std::string& what) { throw ConfigError("sampling: " + what); };

    if (!(cte_length_us > 0.0) || guard_us < 0.0 || reference_us < 0.0 || !(slot_us > 0.0)) {
        fail("durations must be non-negative and cte_length, slot > 0");
    }
    if (!(sample_period_ns > 0.0)) {
        fail("sample_period must be > 0");
    }
    if (!is_integral(slot_us * 1000.0 / sample_period_ns)) {
        fail(fmt::format("slot ({} us) is not an integer multiple of sample_period ({} ns)", slot_us,
                         sample_period_ns));
    }
    if (!is_integral(reference_us * 1000.0 / sample_period_ns)) {
        fail("reference period is not an integer multiple of sample_period");
    }
    if (!is_integral(tone_rate_deg_per_us * slot_us / 360.0)) {
        fail(fmt::format("tone_rate * slot = {} deg is not a multiple of 360",
                         tone_rate_deg_per_us * slot_us));
    }
    if (fixed_point_halfscale <= 0 || fixed_point_halfscale > 32767) {
        fail("fixed_point_halfscale must be in [1, 32767]");
    }
    if (retained_indices.empty()) {
        fail("retained_indices is empty");
    }
    const int sps = samples_per_slot();
    for (std::size_t i = 0; i < retained_indices.size(); ++i) {
        const int r = retained_indices[i];
        if (r < 0 || r >= sps) {
            fail(fmt::format("retained index {} outside [0, {})", r, sps));
        }
        if (i > 0 && r <= retained_indices[i - 1]) {
            fail("retained_indices must be strictly increasing");
        }
    }
    if (rotations < 1) {
        fail("rotations must be >= 1");
    }
    const double switched_window = cte_length_us - guard_us - reference_us;
    if (rotations * geom.antenna_count() * slot_us > switched_window + 1e-9) {
        fail(fmt::format("{} rotations x {} antennas x {} us do not fit the {} us switched window",
                         rotations, geom.antenna_count(), slot_us, switched_window));
    }
    if (switched_slots < rotations * geom.antenna_count()) {
        fail(fmt::format("switched_slots ({}) < rotations x antenna_count ({})", switched_slots,
                         rotations * geom.antenna_count()));
    }
    if (switched_slots * slot_us > switched_window + 1e-9) {
        fail(fmt::format("switched_slots ({}) x slot exceed the {} us switched window", switched_slots,
                         switched_window));
    }
}

std::int16_t to_fixed_point(double deg, int halfscale) {
    if (!(deg >= -180.0 && deg <= 180.0)) {
        throw std::out_of_range(fmt::format("phase {} deg outside [-180, 180]", deg));
    }
    // std::round is half-away-from-zero
    return static_cast<std::int16_t>(std::round(deg * halfscale / 180.0));
}

double to_degrees(std::int16_t value, int halfscale) {
    if (value > halfscale || value < -halfscale) {
        throw FormatError(fmt::format("sample {} exceeds fixed-point bound +/-{}", value, halfscale));
    }
    return static_cast<double>(value) * 180.0 / halfscale;
}

std::vector<std::int16_t> PacketSamples::flatten() const {
    std::vector<std::int16_t> out(reference);
    for (const auto& s : slots) {
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

std::vector<int> circular_antenna_sequence(int antenna_count, int slots) {
    std::vector<int> seq(static_cast<std::size_t>(slots));
    for (int i = 0; i < slots; ++i) {
        seq[static_cast<std::size_t>(i)] = i % antenna_count + 1;
    }
    return seq;
}

}  // namespace cteaoa
