// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cteaoa/angles.hpp"
#include "cteaoa/errors.hpp"
#include "cteaoa/pipeline.hpp"
#include "cteaoa/simulator.hpp"
#include "reference_algorithms.hpp"

using namespace cteaoa;

namespace {

const ArrayGeometry kGeom(8, 65.0);
const CarrierModel kCarrier;
const SamplingConfig kCfg;

PhaseSeries series_of(std::vector<std::vector<double>> slots) {
    PhaseSeries s;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        s.antennas.push_back(static_cast<int>(i % 8) + 1);
    }
    s.slots = std::move(slots);
    return s;
}

DiffProfile folded_of(std::vector<double> v) {
    DiffProfile p;
    p.kind = ProfileKind::folded;
    for (std::size_t i = 0; i < v.size(); ++i) {
        p.pairs.push_back(static_cast<int>(i) + 1);
    }
    p.values = std::move(v);
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("unwrap examples") {
    CHECK(unwrap(series_of({{10, 55, 100}})).slots[0] == std::vector<double>{10, 55, 100});
    CHECK(unwrap(series_of({{170, -175, -130}})).slots[0] == std::vector<double>{170, 185, 230});
    CHECK(unwrap(series_of({{-100, -55, -10}})).slots[0] == std::vector<double>{-100, -55, -10});
    // two crossings in one slot
    CHECK(unwrap(series_of({{170, -100, 100, -100}})).slots[0] ==
          std::vector<double>{170, 260, 460, 620});
    CHECK_THROWS_AS(unwrap(series_of({{10}})), ConfigError);
}

TEST_CASE("phase_diffs examples") {
    const auto same = phase_diffs(series_of({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}));
    CHECK(same.values == std::vector<double>{0, 0});

    const auto d = phase_diffs(series_of({{100, 145, 190}, {10, 55, 100}}));
    REQUIRE(d.size() == 1);
    CHECK(d.values[0] == 90.0);
    CHECK(d.pairs[0] == 1);

    const auto folded = phase_diffs(series_of({{270, 270, 270}, {0, 0, 0}}));
    CHECK(folded.values[0] == -90.0);

    CHECK_THROWS_AS(phase_diffs(series_of({{1, 2, 3}})), ConfigError);
    CHECK_THROWS_AS(phase_diffs(series_of({{1, 2, 3}, {1, 2}})), ConfigError);
}

TEST_CASE("unwrap and phase_diffs match the literal pseudocode") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> phase(-180.0, 180.0);
    std::uniform_int_distribution<int> groups(2, 40);
    std::uniform_int_distribution<int> samples(2, 8);
    for (int trial = 0; trial < 2000; ++trial) {
        const int g = groups(rng);
        const int s = samples(rng);
        std::vector<std::vector<double>> data(static_cast<std::size_t>(g),
                                              std::vector<double>(static_cast<std::size_t>(s)));
        for (auto& row : data) {
            for (auto& v : row) {
                v = phase(rng);
            }
        }
        auto literal = data;
        reference::unwrap(literal);
        const auto ours = unwrap(series_of(data));
        REQUIRE(ours.slots == literal);

        const auto ref = reference::phase_diffs(literal);
        const auto diffs = phase_diffs(ours);
        REQUIRE(diffs.size() == static_cast<std::size_t>(g - 1));
        for (int i = 1; i < g; ++i) {
            REQUIRE(diffs.values[static_cast<std::size_t>(i - 1)] == ref[static_cast<std::size_t>(i)]);
            CHECK(diffs.values[static_cast<std::size_t>(i - 1)] >= -180.0);
            CHECK(diffs.values[static_cast<std::size_t>(i - 1)] < 180.0);
        }
    }
}

TEST_CASE("fold_rotations") {
    DiffProfile raw;
    for (int r = 0; r < 4; ++r) {
        for (int p = 0; p < 8; ++p) {
            raw.values.push_back(10.0 * p - 35.0);
            raw.pairs.push_back(p + 1);
        }
    }
    const auto f = fold_rotations(raw, 8);
    CHECK(f.kind == ProfileKind::folded);
    for (int p = 0; p < 8; ++p) {
        CHECK(f.values[p] == doctest::Approx(10.0 * p - 35.0).epsilon(1e-12));
    }

    DiffProfile seam;
    seam.values = {170, -170, 170, -170};
    seam.pairs = {1, 1, 1, 1};
    const auto s = fold_rotations(seam, 1);
    CHECK(std::abs(std::abs(s.values[0]) - 180.0) < 1e-9);
    CHECK(s.values[0] < 180.0);

    // arithmetic compatibility mode averages through the seam
    CHECK(fold_rotations(seam, 1, MeanKind::arithmetic).values[0] == 0.0);

    DiffProfile cancel;
    cancel.values = {90, -90};
    cancel.pairs = {1, 1};
    CHECK_THROWS_AS(fold_rotations(cancel, 1), DegenerateError);

    // 31 differences: pair 8 gets three contributions, the rest four
    DiffProfile open = raw;
    open.values.pop_back();
    open.pairs.pop_back();
    const auto o = fold_rotations(open, 8);
    CHECK(o.values[7] == doctest::Approx(35.0));

    DiffProfile missing;
    missing.values = {1.0};
    missing.pairs = {1};
    CHECK_THROWS_AS(fold_rotations(missing, 8), DegenerateError);
}

TEST_CASE("average_profiles") {
    const auto a = folded_of({10, -20, 30, 170});
    CHECK(average_profiles(std::vector{a}).values == a.values);

    std::vector<DiffProfile> copies(7, a);
    const auto avg = average_profiles(copies);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(avg.values[i] == doctest::Approx(a.values[i]).epsilon(1e-12));
    }

    auto neg = a;
    for (auto& v : neg.values) {
        v = wrap180(v + 180.0);
    }
    CHECK_THROWS_AS(average_profiles(std::vector{a, neg}), DegenerateError);
    CHECK_THROWS_AS(average_profiles(std::vector<DiffProfile>{}), ConfigError);
    CHECK_THROWS_AS(average_profiles(std::vector{a, folded_of({1, 2})}), ConfigError);

    // order independence of the reduction
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> v(-60.0, 60.0);
    std::vector<DiffProfile> many;
    for (int k = 0; k < 25; ++k) {
        many.push_back(folded_of({v(rng), v(rng), v(rng), v(rng)}));
        many.back().provenance = {std::to_string(k)};
    }
    const auto forward = average_profiles(many);
    CHECK(forward.provenance.size() == 25);
    std::shuffle(many.begin(), many.end(), rng);
    const auto shuffled = average_profiles(many);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(forward.values[i] - shuffled.values[i]) < 1e-9);
    }
}

TEST_CASE("averaging noisy packets recovers the profile") {
    NoiseModel noise;
    noise.sigma_deg = 45.0;
    noise.seed = 77;
    const double aoa = 250.0;
    const auto model = expected_profile(kGeom, kCarrier, aoa);
    std::vector<DiffProfile> folded;
    double worst_single = 0.0;
    for (const auto& pkt : simulate_packets(kGeom, kCarrier, kCfg, aoa, noise, 51)) {
        folded.push_back(process_packet(pkt, kCfg, 8).folded);
        worst_single = std::max(worst_single, rms_circular_distance(folded.back().values, model));
    }
    const double avg_rms = rms_circular_distance(average_profiles(folded).values, model);
    CHECK(avg_rms < 10.0);
    CHECK(worst_single > 2.0 * avg_rms);
}

TEST_CASE("normalize_profile") {
    CHECK(normalize_profile(folded_of({-90, 90})).values == std::vector<double>{-1, 1});
    const auto unit = folded_of({-0.5, 1.0, 0.25});
    CHECK(normalize_profile(unit).values == unit.values);
    CHECK_THROWS_AS(normalize_profile(folded_of({0, 0, 0})), DegenerateError);

    const auto model = expected_profile(kGeom, kCarrier, 12.0);
    const auto base = normalize_profile(folded_of(model));
    for (double c : {0.01, 0.5, 3.0, 1000.0}) {
        auto scaled = model;
        for (auto& v : scaled) {
            v *= c;
        }
        const auto n = normalize_profile(folded_of(scaled));
        CHECK(n.kind == ProfileKind::folded);
        for (std::size_t i = 0; i < model.size(); ++i) {
            CHECK(n.values[i] == doctest::Approx(base.values[i]).epsilon(1e-12));
            CHECK(std::abs(n.values[i]) <= 1.0);
        }
    }
}

TEST_CASE("rotations agree for noise-free packets") {
    const double step = 180.0 / 201.0;
    for (double aoa = 3.0; aoa < 360.0; aoa += 11.0) {
        const auto pkt = simulate_packet(kGeom, kCarrier, kCfg, aoa, NoiseModel{}, aoa - 90.0);
        const auto raw = process_packet(pkt, kCfg, 8).raw;
        REQUIRE(raw.size() == 32);
        for (std::size_t n = 8; n < raw.size(); ++n) {
            CHECK(std::abs(angle_diff(raw.values[n], raw.values[n % 8])) <= 2.0 * step + 1e-12);
            CHECK(raw.pairs[n] == static_cast<int>(n % 8) + 1);
        }
    }
}

TEST_CASE("pipeline uses 31 differences without a closing slot") {
    auto cfg = kCfg;
    cfg.switched_slots = 32;
    CHECK(cfg.pipeline_slots(8) == 32);
    const auto pkt = simulate_packet(kGeom, kCarrier, cfg, 100.0, NoiseModel{}, 0.0);
    const auto p = process_packet(pkt, cfg, 8);
    CHECK(p.raw.size() == 31);
    const auto model = expected_profile(kGeom, kCarrier, 100.0);
    for (int n = 0; n < 8; ++n) {
        CHECK(std::abs(angle_diff(p.folded.values[n], model[n])) <= 360.0 / 402.0);
    }
}

TEST_SUITE_END();
