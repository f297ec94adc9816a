// SPDX-License-Identifier: Apache-2.0

#include "cteaoa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "cteaoa/angles.hpp"
#include "cteaoa/errors.hpp"

namespace cteaoa {

namespace {

double mean_of(std::span<const double> values, MeanKind kind, const char* what, std::size_t index) {
    if (kind == MeanKind::arithmetic) {
        double acc = 0.0;
        for (double v : values) {
            acc += v;
        }
        return wrap180(acc / static_cast<double>(values.size()));
    }
    const auto m = circular_mean(values);
    if (!m) {
        throw DegenerateError(fmt::format("{}: unit vectors cancel at index {}", what, index));
    }
    return *m;
}

}  // namespace

std::string packet_id(const PacketSamples& packet) {
    return fmt::format("{}:{}", packet.meta.transmitter, packet.meta.counter);
}

PhaseSeries decode_series(const PacketSamples& packet, const SamplingConfig& cfg,
                          int antenna_count) {
    const auto wanted = static_cast<std::size_t>(cfg.pipeline_slots(antenna_count));
    const std::size_t used = std::min(wanted, packet.slots.size());
    if (packet.antenna_sequence.size() != packet.slots.size()) {
        throw FormatError("packet: antenna sequence and slot count differ");
    }

    PhaseSeries series;
    series.slots.reserve(used);
    for (std::size_t i = 0; i < used; ++i) {
        const auto& raw = packet.slots[i];
        std::vector<double> decoded;
        decoded.reserve(cfg.retained_indices.size());
        for (int r : cfg.retained_indices) {
            if (static_cast<std::size_t>(r) >= raw.size()) {
                throw FormatError(fmt::format("slot {} has {} samples, retained index {} missing", i,
                                              raw.size(), r));
            }
            decoded.push_back(to_degrees(raw[static_cast<std::size_t>(r)], cfg.fixed_point_halfscale));
        }
        series.slots.push_back(std::move(decoded));
        series.antennas.push_back(packet.antenna_sequence[i]);
    }
    return series;
}

PhaseSeries unwrap(PhaseSeries series) {
    for (std::size_t i = 0; i < series.slots.size(); ++i) {
        auto& s = series.slots[i];
        if (s.size() < 2) {
            throw ConfigError(fmt::format("unwrap: slot {} holds {} samples, need >= 2", i, s.size()));
        }
        for (std::size_t j = 1; j < s.size(); ++j) {
            if (s[j] < s[j - 1] - 180.0) {
                for (std::size_t k = j; k < s.size(); ++k) {
                    s[k] += 360.0;
                }
            }
        }
    }
    return series;
}

DiffProfile phase_diffs(const PhaseSeries& series) {
    if (series.slots.size() < 2) {
        throw ConfigError("phase_diffs: need at least two slots");
    }
    DiffProfile out;
    out.kind = ProfileKind::raw;
    out.values.reserve(series.slots.size() - 1);
    for (std::size_t i = 1; i < series.slots.size(); ++i) {
        const auto& a = series.slots[i - 1];
        const auto& b = series.slots[i];
        if (a.size() != b.size() || a.empty()) {
            throw ConfigError(fmt::format("phase_diffs: slots {} and {} hold {} and {} samples", i - 1,
                                          i, a.size(), b.size()));
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            sum += a[j] - b[j];
        }
        out.values.push_back(wrap180(sum / static_cast<double>(a.size())));
        out.pairs.push_back(series.antennas.size() > i - 1 ? series.antennas[i - 1]
                                                           : static_cast<int>(i));
    }
    return out;
}

DiffProfile fold_rotations(const DiffProfile& raw, int antenna_count, MeanKind mean) {
    if (antenna_count < 1) {
        throw ConfigError("fold_rotations: antenna_count must be positive");
    }
    if (raw.pairs.size() != raw.values.size()) {
        throw ConfigError("fold_rotations: pair labels and values differ in length");
    }
    std::vector<std::vector<double>> per_pair(static_cast<std::size_t>(antenna_count));
    for (std::size_t n = 0; n < raw.values.size(); ++n) {
        const int p = raw.pairs[n];
        if (p < 1 || p > antenna_count) {
            throw ConfigError(fmt::format("fold_rotations: pair label {} outside 1..{}", p,
                                          antenna_count));
        }
        per_pair[static_cast<std::size_t>(p - 1)].push_back(raw.values[n]);
    }

    DiffProfile out;
    out.kind = ProfileKind::folded;
    out.provenance = raw.provenance;
    for (int p = 0; p < antenna_count; ++p) {
        const auto& v = per_pair[static_cast<std::size_t>(p)];
        if (v.empty()) {
            throw DegenerateError(fmt::format("fold_rotations: no difference for pair {}", p + 1));
        }
        out.values.push_back(mean_of(v, mean, "fold_rotations", static_cast<std::size_t>(p)));
        out.pairs.push_back(p + 1);
    }
    return out;
}

DiffProfile average_profiles(std::span<const DiffProfile> profiles, MeanKind mean) {
    if (profiles.empty()) {
        throw ConfigError("average_profiles: no profiles");
    }
    const auto& first = profiles.front();
    for (const auto& p : profiles) {
        if (p.size() != first.size() || p.kind != first.kind) {
            throw ConfigError("average_profiles: profiles differ in length or kind");
        }
    }

    DiffProfile out;
    out.kind = first.kind;
    out.pairs = first.pairs;
    std::vector<double> column(profiles.size());
    for (std::size_t n = 0; n < first.size(); ++n) {
        for (std::size_t k = 0; k < profiles.size(); ++k) {
            column[k] = profiles[k].values[n];
        }
        out.values.push_back(mean_of(column, mean, "average_profiles", n));
    }
    for (const auto& p : profiles) {
        out.provenance.insert(out.provenance.end(), p.provenance.begin(), p.provenance.end());
    }
    return out;
}

DiffProfile normalize_profile(const DiffProfile& profile) {
    double peak = 0.0;
    for (double v : profile.values) {
        peak = std::max(peak, std::abs(v));
    }
    if (!(peak > 0.0)) {
        throw DegenerateError("normalize_profile: all-zero profile");
    }
    DiffProfile out = profile;
    for (double& v : out.values) {
        v /= peak;
    }
    return out;
}

ProcessedPacket process_packet(const PacketSamples& packet, const SamplingConfig& cfg,
                               int antenna_count, MeanKind mean) {
    ProcessedPacket out;
    out.raw = phase_diffs(unwrap(decode_series(packet, cfg, antenna_count)));
    out.raw.provenance = {packet_id(packet)};
    out.folded = fold_rotations(out.raw, antenna_count, mean);
    return out;
}

}  // namespace cteaoa
