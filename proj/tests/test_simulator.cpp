// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "cteaoa/angles.hpp"
#include "cteaoa/errors.hpp"
#include "cteaoa/pipeline.hpp"
#include "cteaoa/simulator.hpp"

using namespace cteaoa;

namespace {

const ArrayGeometry kGeom(8, 65.0);
const CarrierModel kCarrier;
const SamplingConfig kCfg;

}  // namespace

TEST_SUITE_BEGIN("simulator");

TEST_CASE("fixed-point encoding") {
    CHECK(to_fixed_point(0.0) == 0);
    CHECK(to_degrees(0) == 0.0);
    CHECK(to_fixed_point(180.0) == 201);
    CHECK(to_fixed_point(-180.0) == -201);
    CHECK(to_fixed_point(90.0) == 101);  // 100.5 rounds away from zero
    CHECK(to_fixed_point(-90.0) == -101);
    CHECK(to_degrees(101) == doctest::Approx(90.44776119402985));
    CHECK(std::abs(to_degrees(to_fixed_point(90.0)) - 90.0) < 0.45);

    CHECK_THROWS_AS(to_fixed_point(180.5), std::out_of_range);
    CHECK_THROWS_AS(to_degrees(202), FormatError);
    CHECK_THROWS_AS(to_degrees(-202), FormatError);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> any(-180.0, 180.0);
    for (int i = 0; i < 20000; ++i) {
        const double x = any(rng);
        CHECK(std::abs(to_degrees(to_fixed_point(x)) - x) <= 90.0 / 201.0 + 1e-12);
    }
}

TEST_CASE("sampling config defaults and invariants") {
    CHECK(kCfg.samples_per_slot() == 8);
    CHECK(kCfg.reference_samples() == 16);
    CHECK(kCfg.samples_per_packet() == 304);
    CHECK(kCfg.pipeline_slots(8) == 33);
    CHECK_NOTHROW(kCfg.validate(kGeom));

    auto bad = kCfg;
    bad.sample_period_ns = 300.0;
    CHECK_THROWS_WITH_AS(bad.validate(kGeom), doctest::Contains("integer multiple"), ConfigError);
    bad = kCfg;
    bad.tone_rate_deg_per_us = 80.0;
    CHECK_THROWS_WITH_AS(bad.validate(kGeom), doctest::Contains("multiple of 360"), ConfigError);
    bad = kCfg;
    bad.retained_indices = {1, 8};
    CHECK_THROWS_WITH_AS(bad.validate(kGeom), doctest::Contains("retained index"), ConfigError);
    bad = kCfg;
    bad.rotations = 5;
    CHECK_THROWS_WITH_AS(bad.validate(kGeom), doctest::Contains("switched window"), ConfigError);

    NoiseModel neg;
    neg.sigma_deg = -1.0;
    CHECK_THROWS_AS(simulate_packet(kGeom, kCarrier, kCfg, 0.0, neg, 0.0), ConfigError);
}

TEST_CASE("packet shape") {
    const auto pkt = simulate_packet(kGeom, kCarrier, kCfg, 30.0, NoiseModel{}, 12.0);
    CHECK(pkt.reference.size() == 16);
    CHECK(pkt.slots.size() == 36);
    CHECK(pkt.flatten().size() == 304);
    for (std::size_t i = 0; i < pkt.slots.size(); ++i) {
        CHECK(pkt.antenna_sequence[i] == static_cast<int>(i % 8) + 1);
        CHECK(pkt.slots[i].size() == 8);
        for (auto v : pkt.slots[i]) {
            CHECK(std::abs(v) <= 201);
        }
    }
}

TEST_CASE("tone progresses 45 degrees per sample within a slot") {
    const auto pkt = simulate_packet(kGeom, kCarrier, kCfg, 77.0, NoiseModel{}, -33.3);
    for (const auto& slot : pkt.slots) {
        for (std::size_t j = 1; j < slot.size(); ++j) {
            const double step = wrap180(to_degrees(slot[j]) - to_degrees(slot[j - 1]));
            CHECK(std::abs(step - 45.0) <= 180.0 / 201.0 + 1e-12);
        }
    }
}

TEST_CASE("vanishing baseline yields zero differences") {
    const ArrayGeometry point(8, 1e-9);
    const auto pkt = simulate_packet(point, kCarrier, kCfg, 123.0, NoiseModel{}, 10.0);
    const auto processed = process_packet(pkt, kCfg, 8);
    for (double v : processed.raw.values) {
        CHECK(v == 0.0);
    }
    for (std::size_t i = 1; i < pkt.slots.size(); ++i) {
        CHECK(pkt.slots[i] == pkt.slots[0]);
    }
}

TEST_CASE("noise-free packets reproduce the model profile") {
    for (double aoa = 0.0; aoa < 360.0; aoa += 7.5) {
        const auto pkt = simulate_packet(kGeom, kCarrier, kCfg, aoa, NoiseModel{}, aoa * 1.7 - 150.0);
        const auto folded = process_packet(pkt, kCfg, 8).folded;
        const auto model = expected_profile(kGeom, kCarrier, aoa);
        for (int n = 0; n < 8; ++n) {
            CHECK(std::abs(angle_diff(folded.values[n], model[n])) <= 360.0 / 402.0);
        }
    }
}

TEST_CASE("determinism and seed handling") {
    NoiseModel noisy;
    noisy.sigma_deg = 40.0;
    noisy.seed = 99;
    const auto a = simulate_packet(kGeom, kCarrier, kCfg, 10.0, noisy, 5.0);
    const auto b = simulate_packet(kGeom, kCarrier, kCfg, 10.0, noisy, 5.0);
    CHECK(a.flatten() == b.flatten());
    noisy.seed = 100;
    const auto c = simulate_packet(kGeom, kCarrier, kCfg, 10.0, noisy, 5.0);
    CHECK(a.flatten() != c.flatten());

    NoiseModel clean1;
    clean1.seed = 1;
    NoiseModel clean2;
    clean2.seed = 987654321;
    CHECK(simulate_packet(kGeom, kCarrier, kCfg, 200.0, clean1, 1.0).flatten() ==
          simulate_packet(kGeom, kCarrier, kCfg, 200.0, clean2, 1.0).flatten());

    const auto batch1 = simulate_packets(kGeom, kCarrier, kCfg, 45.0, noisy, 5, "b1");
    const auto batch2 = simulate_packets(kGeom, kCarrier, kCfg, 45.0, noisy, 5, "b1");
    REQUIRE(batch1.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(batch1[i].flatten() == batch2[i].flatten());
        CHECK(batch1[i].meta.counter == static_cast<std::int64_t>(i));
        CHECK(batch1[i].meta.transmitter == "b1");
    }
    CHECK(batch1[0].flatten() != batch1[1].flatten());
    CHECK(simulate_packets(kGeom, kCarrier, kCfg, 45.0, noisy, 0).empty());
}

TEST_CASE("transient corruption only touches non-retained indices") {
    NoiseModel clean;
    NoiseModel corrupt;
    corrupt.transient_corruption = true;
    corrupt.seed = 4242;
    const auto a = simulate_packet(kGeom, kCarrier, kCfg, 60.0, clean, 20.0);
    const auto b = simulate_packet(kGeom, kCarrier, kCfg, 60.0, corrupt, 20.0);
    bool any_changed = false;
    for (std::size_t i = 0; i < a.slots.size(); ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            const bool retained = j >= 1 && j <= 3;
            if (retained) {
                CHECK(a.slots[i][j] == b.slots[i][j]);
            } else if (a.slots[i][j] != b.slots[i][j]) {
                any_changed = true;
            }
        }
    }
    CHECK(any_changed);
    CHECK(process_packet(a, kCfg, 8).raw.values == process_packet(b, kCfg, 8).raw.values);

    // keeping a corrupted index in the pipeline breaks the profile
    auto wide = kCfg;
    wide.retained_indices = {0, 1, 2, 3, 4, 5, 6, 7};
    const auto model = expected_profile(kGeom, kCarrier, 60.0);
    const auto folded = process_packet(b, wide, 8).folded;
    double worst = 0.0;
    for (int n = 0; n < 8; ++n) {
        worst = std::max(worst, std::abs(angle_diff(folded.values[n], model[n])));
    }
    CHECK(worst > 5.0);
}

TEST_SUITE_END();
