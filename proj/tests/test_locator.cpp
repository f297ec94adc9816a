// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "cteaoa/angles.hpp"
#include "cteaoa/errors.hpp"
#include "cteaoa/locator.hpp"

using namespace cteaoa;

TEST_SUITE_BEGIN("locator");

TEST_CASE("bearing conventions") {
    const BeaconMap map({{"east", {1.0, 0.0}}, {"north", {0.0, 1.0}}});
    auto b = bearings_oracle(map, {0.0, 0.0}, 0.0);
    CHECK(b["east"] == doctest::Approx(0.0));
    CHECK(b["north"] == doctest::Approx(90.0));
    b = bearings_oracle(map, {0.0, 0.0}, 90.0);
    CHECK(b["east"] == doctest::Approx(270.0));
    CHECK(b["north"] == doctest::Approx(0.0));
    CHECK_THROWS_AS(bearings_oracle(map, {1.0, 0.0}, 0.0), DegenerateError);

    // propagation azimuth 0 (clockwise board frame) means the source sits behind, at 180
    CHECK(aoa_to_bearing(0.0, BearingConvention::propagation_clockwise) == doctest::Approx(180.0));
    CHECK(aoa_to_bearing(90.0, BearingConvention::propagation_clockwise) == doctest::Approx(90.0));
    CHECK(aoa_to_bearing(45.0, BearingConvention::propagation_clockwise) == doctest::Approx(135.0));
    CHECK(aoa_to_bearing(-30.0, BearingConvention::bearing_ccw) == doctest::Approx(330.0));
}

TEST_CASE("beacon map validation") {
    CHECK_THROWS_AS(BeaconMap({{"a", {0, 0}}}), ConfigError);
    CHECK_THROWS_AS(BeaconMap({{"a", {0, 0}}, {"a", {1, 0}}}), ConfigError);
    CHECK_THROWS_AS(BeaconMap({{"a", {0, 0}}, {"b", {0, 0}}}), ConfigError);
    const auto sq = BeaconMap::field_square();
    CHECK(sq.beacons().size() == 4);
    CHECK(sq.at("b1").position.x == 12.0);
    CHECK(sq.at("b1").position.y == 12.0);
    CHECK(sq.bounds().max.x == 12.0);
    CHECK_THROWS_AS(sq.at("b9"), ConfigError);
}

TEST_CASE("exact bearings recover the position") {
    const auto map = BeaconMap::field_square();
    for (double heading : {0.0, 37.0, -120.0}) {
        const auto pos = locate(map, bearings_oracle(map, {6.0, 6.0}, heading), heading);
        CHECK(std::abs(pos.position.x - 6.0) < 0.03);
        CHECK(std::abs(pos.position.y - 6.0) < 0.03);
        CHECK(pos.residual_deg < 1e-6);
        CHECK(pos.beacons_used.size() == 4);
    }

    // interior 3 m grid points
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            const Point2 truth{3.0 * i, 3.0 * j};
            const auto pos = locate(map, bearings_oracle(map, truth, 0.0), 0.0);
            CHECK(distance(pos.position, truth) < 0.03);
        }
    }

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> coord(0.2, 11.8);
    std::uniform_real_distribution<double> head(0.0, 360.0);
    for (int t = 0; t < 100; ++t) {
        const Point2 truth{coord(rng), coord(rng)};
        const double h = head(rng);
        const auto pos = locate(map, bearings_oracle(map, truth, h), h);
        CHECK(distance(pos.position, truth) < 1e-4);
        CHECK(pos.residual_deg < 1e-6);
    }
}

TEST_CASE("translation equivariance") {
    const auto map = BeaconMap::field_square();
    const Point2 shift{-250.5, 1000.25};
    std::vector<Beacon> moved;
    for (const auto& b : map.beacons()) {
        moved.push_back({b.id, {b.position.x + shift.x, b.position.y + shift.y}});
    }
    const BeaconMap far(moved);
    const Point2 truth{4.4, 7.1};
    auto bearings = bearings_oracle(map, truth, 0.0);
    bearings["b1"] += 3.0;
    const auto a = locate(map, bearings, 0.0);
    const auto b = locate(far, bearings, 0.0);
    CHECK(a.position.x - truth.x == doctest::Approx(b.position.x - (truth.x + shift.x)).epsilon(1e-6));
    CHECK(a.position.y - truth.y == doctest::Approx(b.position.y - (truth.y + shift.y)).epsilon(1e-6));
    CHECK(a.residual_deg > 0.0);
}

TEST_CASE("perturbed bearings degrade gracefully") {
    const auto map = BeaconMap::field_square();
    const Point2 truth{6.0, 6.0};
    auto bearings = bearings_oracle(map, truth, 0.0);
    bearings["b2"] += 5.0;
    const auto pos = locate(map, bearings, 0.0);
    CHECK(pos.residual_deg > 0.0);

    // error grows with the size of a single-beacon bearing offset
    double prev = 0.0;
    for (double e : {0.5, 1.0, 2.0, 5.0}) {
        auto b = bearings_oracle(map, truth, 0.0);
        b["b2"] += e;
        const double err = distance(locate(map, b, 0.0).position, truth);
        CHECK(err > prev);
        prev = err;
    }
    CHECK(prev < 1.0);
}

TEST_CASE("degenerate and insufficient bearings") {
    const BeaconMap line({{"w", {0.0, 0.0}}, {"e", {10.0, 0.0}}},
                         AreaBounds{{-5.0, -5.0}, {15.0, 5.0}});
    // receiver on the baseline: both bearings are along the line
    CHECK_THROWS_AS(locate(line, bearings_oracle(line, {4.0, 0.0}, 0.0), 0.0), DegenerateError);
    CHECK_NOTHROW(locate(line, bearings_oracle(line, {4.0, 3.0}, 0.0), 0.0));

    const auto map = BeaconMap::field_square();
    CHECK_THROWS_AS(locate(map, Bearings{{"b1", 10.0}}, 0.0), ConfigError);
    CHECK_THROWS_AS(locate(map, Bearings{{"b1", 10.0}, {"zz", 4.0}}, 0.0), ConfigError);
}

TEST_CASE("locate from AoA estimates") {
    const auto map = BeaconMap::field_square();
    const Point2 truth{3.0, 9.0};
    std::map<std::string, AoAEstimate> est;
    for (const auto& [id, bearing] : bearings_oracle(map, truth, 15.0)) {
        AoAEstimate e;
        e.angle_deg = wrap360(180.0 - bearing);  // back to a clockwise propagation azimuth
        est[id] = e;
    }
    const auto pos = locate(map, est, 15.0, BearingConvention::propagation_clockwise);
    CHECK(distance(pos.position, truth) < 1e-4);
}

TEST_SUITE_END();
