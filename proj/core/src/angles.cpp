// SPDX-License-Identifier: Apache-2.0

#include "cteaoa/angles.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace cteaoa {

double wrap180(double deg) {
    double r = std::fmod(deg + 180.0, 360.0);
    if (r < 0.0) {
        r += 360.0;
    }
    // r + 360 can round up to exactly 360 for tiny negative r
    if (r >= 360.0) {
        r = 0.0;
    }
    return r - 180.0;
}

double wrap360(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) {
        r += 360.0;
    }
    if (r >= 360.0) {
        r = 0.0;
    }
    return r;
}

namespace {

struct Resultant {
    double c = 0.0;
    double s = 0.0;
};

Resultant sum_unit_vectors(std::span<const double> deg) {
    Resultant r;
    for (double d : deg) {
        r.c += std::cos(d * kRadPerDeg);
        r.s += std::sin(d * kRadPerDeg);
    }
    return r;
}

}  // namespace

std::optional<double> circular_mean(std::span<const double> deg, double min_resultant) {
    if (deg.empty()) {
        return std::nullopt;
    }
    const auto r = sum_unit_vectors(deg);
    if (std::hypot(r.c, r.s) < min_resultant) {
        return std::nullopt;
    }
    return wrap180(std::atan2(r.s, r.c) * kDegPerRad);
}

double mean_resultant_length(std::span<const double> deg) {
    if (deg.empty()) {
        return 0.0;
    }
    const auto r = sum_unit_vectors(deg);
    return std::hypot(r.c, r.s) / static_cast<double>(deg.size());
}

double circular_std(std::span<const double> deg) {
    const double len = mean_resultant_length(deg);
    if (len <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    // R can exceed 1 by an ulp for identical inputs
    return std::sqrt(std::max(0.0, -2.0 * std::log(std::min(1.0, len)))) * kDegPerRad;
}

double rms_circular_distance(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    if (a.empty()) {
        return 0.0;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = wrap180(a[i] - b[i]);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(a.size()));
}

}  // namespace cteaoa
