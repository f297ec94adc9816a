// SPDX-License-Identifier: Apache-2.0

#include "cteaoa/estimator.hpp"

#include <cmath>
#include <complex>
#include <fmt/format.h>

#include "cteaoa/angles.hpp"
#include "cteaoa/errors.hpp"

namespace cteaoa {

std::string to_string(EstimateMethod m) { return m == EstimateMethod::grid ? "grid" : "harmonic"; }

std::string to_string(AveragingStrategy s) {
    return s == AveragingStrategy::average_then_fit ? "avg-fit" : "fit-avg";
}

EstimateMethod parse_method(const std::string& s) {
    if (s == "grid") {
        return EstimateMethod::grid;
    }
    if (s == "harmonic") {
        return EstimateMethod::harmonic;
    }
    throw ConfigError("unknown estimation method '" + s + "'");
}

AveragingStrategy parse_strategy(const std::string& s) {
    if (s == "avg-fit") {
        return AveragingStrategy::average_then_fit;
    }
    if (s == "fit-avg") {
        return AveragingStrategy::fit_then_average;
    }
    throw ConfigError("unknown averaging strategy '" + s + "'");
}

namespace {

void check_folded(const DiffProfile& folded, const ArrayGeometry& geom) {
    if (folded.kind != ProfileKind::folded ||
        folded.size() != static_cast<std::size_t>(geom.antenna_count())) {
        throw ConfigError(fmt::format("estimator: expected a folded profile of length {}, got {}",
                                      geom.antenna_count(), folded.size()));
    }
}

void check_signal(const ArrayGeometry& geom, const CarrierModel& carrier) {
    // a vanishing baseline leaves every model profile flat
    if (profile_amplitude_deg(geom, carrier) < 1e-6) {
        throw DegenerateError("estimator: array baseline carries no angular information");
    }
}

}  // namespace

double profile_residual(std::span<const double> folded, const ArrayGeometry& geom,
                        const CarrierModel& carrier, double aoa_deg) {
    const auto model = expected_profile(geom, carrier, aoa_deg);
    return rms_circular_distance(folded, model);
}

AoAEstimate estimate_grid(const DiffProfile& folded, const ArrayGeometry& geom,
                          const CarrierModel& carrier, double step_deg) {
    check_folded(folded, geom);
    check_signal(geom, carrier);
    if (!(step_deg > 0.0) || step_deg > 360.0) {
        throw ConfigError("estimate_grid: step must be in (0, 360]");
    }

    const auto cost = [&](double aoa) { return profile_residual(folded.values, geom, carrier, aoa); };

    const auto points = static_cast<long>(std::ceil(360.0 / step_deg - 1e-9));
    double best_angle = 0.0;
    double best_cost = cost(0.0);
    for (long i = 1; i < points; ++i) {
        const double a = static_cast<double>(i) * step_deg;
        const double c = cost(a);
        if (c < best_cost) {
            best_cost = c;
            best_angle = a;
        }
    }

    // golden-section on [best - step, best + step]
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = best_angle - step_deg;
    double hi = best_angle + step_deg;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = cost(x1);
    double f2 = cost(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = cost(x2);
        }
    }
    const double refined = 0.5 * (lo + hi);
    const double refined_cost = cost(refined);

    AoAEstimate out;
    out.method = EstimateMethod::grid;
    out.provenance = folded.provenance;
    if (refined_cost <= best_cost) {
        out.angle_deg = wrap360(refined);
        out.residual_deg = refined_cost;
    } else {
        out.angle_deg = wrap360(best_angle);
        out.residual_deg = best_cost;
    }
    return out;
}

AoAEstimate estimate_harmonic(const DiffProfile& folded, const ArrayGeometry& geom,
                              const CarrierModel& carrier, double min_amplitude_deg) {
    check_folded(folded, geom);
    check_signal(geom, carrier);

    std::complex<double> z{0.0, 0.0};
    for (int n = 0; n < geom.antenna_count(); ++n) {
        const double psi = geom.pair_axis_deg(n + 1) * kRadPerDeg;
        z += folded.values[static_cast<std::size_t>(n)] * std::polar(1.0, psi);
    }
    const double amplitude = 2.0 * std::abs(z) / geom.antenna_count();
    if (!(amplitude >= min_amplitude_deg)) {
        throw DegenerateError(fmt::format(
            "estimate_harmonic: first-harmonic amplitude {:.3g} deg below threshold {:.3g} deg",
            amplitude, min_amplitude_deg));
    }

    AoAEstimate out;
    out.method = EstimateMethod::harmonic;
    out.angle_deg = wrap360(std::arg(z) * kDegPerRad - 90.0);
    out.residual_deg = profile_residual(folded.values, geom, carrier, out.angle_deg);
    out.provenance = folded.provenance;
    return out;
}

AoAEstimate estimate(const DiffProfile& folded, const ArrayGeometry& geom,
                     const CarrierModel& carrier, const EstimatorOptions& opts) {
    return opts.method == EstimateMethod::grid ? estimate_grid(folded, geom, carrier, opts.grid_step_deg)
                                               : estimate_harmonic(folded, geom, carrier);
}

AoAEstimate estimate_from_profiles(std::span<const DiffProfile> folded, const ArrayGeometry& geom,
                                   const CarrierModel& carrier, const EstimatorOptions& opts) {
    if (folded.empty()) {
        throw ConfigError("estimator: no packets");
    }

    std::vector<double> angles;
    angles.reserve(folded.size());
    std::vector<AoAEstimate> per_packet;
    per_packet.reserve(folded.size());
    // a packet whose own fit is degenerate is left out of the per-packet angles
    for (const auto& p : folded) {
        try {
            per_packet.push_back(estimate(p, geom, carrier, opts));
            angles.push_back(per_packet.back().angle_deg);
        } catch (const DegenerateError&) {
            if (folded.size() == 1) {
                throw;
            }
        }
    }

    AoAEstimate out;
    if (folded.size() == 1) {
        out = per_packet.front();
    } else if (opts.strategy == AveragingStrategy::average_then_fit) {
        out = estimate(average_profiles(folded, opts.mean), geom, carrier, opts);
    } else {
        const auto mean = circular_mean(angles);
        if (!mean) {
            throw DegenerateError("estimator: per-packet angles cancel");
        }
        out.method = opts.method;
        out.angle_deg = wrap360(*mean);
        std::vector<double> residuals;
        for (const auto& p : folded) {
            residuals.push_back(profile_residual(p.values, geom, carrier, out.angle_deg));
        }
        double acc = 0.0;
        for (double r : residuals) {
            acc += r * r;
        }
        out.residual_deg = std::sqrt(acc / static_cast<double>(residuals.size()));
        for (const auto& p : folded) {
            out.provenance.insert(out.provenance.end(), p.provenance.begin(), p.provenance.end());
        }
    }
    out.packets = folded.size();
    out.dispersion_deg = angles.size() > 1 ? circular_std(angles) : 0.0;
    return out;
}

AoAEstimate estimate_from_packets(std::span<const PacketSamples> packets, const ArrayGeometry& geom,
                                  const CarrierModel& carrier, const SamplingConfig& cfg,
                                  const EstimatorOptions& opts) {
    std::vector<DiffProfile> folded;
    folded.reserve(packets.size());
    for (const auto& pkt : packets) {
        folded.push_back(process_packet(pkt, cfg, geom.antenna_count(), opts.mean).folded);
    }
    return estimate_from_profiles(folded, geom, carrier, opts);
}

}  // namespace cteaoa
