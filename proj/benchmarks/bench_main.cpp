// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "cteaoa/estimator.hpp"
#include "cteaoa/locator.hpp"
#include "cteaoa/pipeline.hpp"
#include "cteaoa/simulator.hpp"

using namespace cteaoa;

namespace {

const ArrayGeometry kGeom(8, 65.0);
const CarrierModel kCarrier;
const SamplingConfig kCfg;

PacketSamples noisy_packet() {
    NoiseModel noise;
    noise.sigma_deg = 20.0;
    noise.seed = 8;
    return simulate_packets(kGeom, kCarrier, kCfg, 37.0, noise, 1).front();
}

void BM_SimulatePacket(benchmark::State& state) {
    NoiseModel noise;
    noise.sigma_deg = 20.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_packet(kGeom, kCarrier, kCfg, 37.0, noise, 12.0));
    }
}
BENCHMARK(BM_SimulatePacket);

void BM_ProcessPacket(benchmark::State& state) {
    const auto pkt = noisy_packet();
    for (auto _ : state) {
        benchmark::DoNotOptimize(process_packet(pkt, kCfg, 8));
    }
}
BENCHMARK(BM_ProcessPacket);

void BM_EstimateGrid(benchmark::State& state) {
    const auto folded = process_packet(noisy_packet(), kCfg, 8).folded;
    const double step = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_grid(folded, kGeom, kCarrier, step));
    }
}
BENCHMARK(BM_EstimateGrid)->Arg(10)->Arg(100);

void BM_EstimateHarmonic(benchmark::State& state) {
    const auto folded = process_packet(noisy_packet(), kCfg, 8).folded;
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_harmonic(folded, kGeom, kCarrier));
    }
}
BENCHMARK(BM_EstimateHarmonic);

void BM_Locate(benchmark::State& state) {
    const auto map = BeaconMap::field_square();
    auto bearings = bearings_oracle(map, {4.2, 7.9}, 10.0);
    bearings["b1"] += 2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(locate(map, bearings, 10.0));
    }
}
BENCHMARK(BM_Locate);

}  // namespace
BENCHMARK_MAIN();
