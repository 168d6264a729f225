// SPDX-License-Identifier: Apache-2.0
//
// chanforge: MIMO channel synthesis from per-ray propagation data
// Copyright (C) 2026 The chanforge authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Serial reference kernels against their OpenMP counterparts, plus the end-to-end constructions.

#include "chanforge/canyon_tracer.hpp"
#include "chanforge/channel_synth.hpp"
#include "chanforge/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace chanforge;
using namespace chanforge::kernels;

namespace
{

std::vector<DyadTerm> dyads(std::size_t n, std::size_t paths)
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<DyadTerm> terms(paths);
    for (auto &t : terms)
    {
        t.weight = {g(rng), g(rng)};
        t.a_rx.resize(n);
        t.a_tx.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            t.a_rx[k] = {g(rng), g(rng)}, t.a_tx[k] = {g(rng), g(rng)};
    }
    return terms;
}

struct SphericalCase
{
    std::vector<SphericalTerm> terms;
    std::vector<Vec3> rx;
};

SphericalCase spherical(std::size_t n, std::size_t paths)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SphericalCase c;
    for (std::size_t k = 0; k < n; ++k)
        c.rx.push_back({50.0, 0.0025 * double(k), 1.5});
    for (std::size_t p = 0; p < paths; ++p)
    {
        SphericalTerm t;
        t.coeff = {u(rng), u(rng)};
        t.center_length_m = 50.0;
        const Vec3 origin{10.0 * u(rng), 40.0 * u(rng), 10.0 * u(rng)};
        for (std::size_t k = 0; k < n; ++k)
            t.tx_images.push_back(origin + Vec3{0.0, 0.0025 * double(k), 0.0});
        c.terms.push_back(std::move(t));
    }
    return c;
}

void BM_geometric_serial(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto terms = dyads(n, 10);
    for (auto _ : state)
    {
        CMatrix h(n, n);
        geometric_serial(terms, h);
        benchmark::DoNotOptimize(h.values().data());
    }
}

void BM_geometric_omp(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto terms = dyads(n, 10);
    for (auto _ : state)
    {
        CMatrix h(n, n);
        geometric_omp(terms, h, static_cast<int>(state.range(1)));
        benchmark::DoNotOptimize(h.values().data());
    }
}

void BM_spherical_serial(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto c = spherical(n, 10);
    const SphericalSettings s{0.005, false};
    for (auto _ : state)
    {
        CMatrix h(n, n);
        spherical_serial(c.terms, c.rx, s, h);
        benchmark::DoNotOptimize(h.values().data());
    }
}

void BM_spherical_omp(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto c = spherical(n, 10);
    const SphericalSettings s{0.005, false};
    for (auto _ : state)
    {
        CMatrix h(n, n);
        spherical_omp(c.terms, c.rx, s, h, static_cast<int>(state.range(1)));
        benchmark::DoNotOptimize(h.values().data());
    }
}

void BM_trace_default_scene(benchmark::State &state)
{
    const Scene scene = Scene::default_scene();
    for (auto _ : state)
        benchmark::DoNotOptimize(trace_scene(scene, {}, 1));
}

void BM_full_array_channel(benchmark::State &state)
{
    const Scene scene = Scene::default_scene();
    const Vec3 rx = scene.rx_list[0].position;
    const auto paths = trace_paths(scene, rx);
    ArrayConfig cfg;
    cfg.n_elements = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(full_array_channel(paths, cfg.at(scene.tx), cfg.at(rx), scene.frequency_hz));
}

} // namespace

BENCHMARK(BM_geometric_serial)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_geometric_omp)->Args({16, 4})->Args({64, 4})->Args({256, 4});
BENCHMARK(BM_spherical_serial)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_spherical_omp)->Args({16, 4})->Args({64, 4})->Args({256, 4});
BENCHMARK(BM_trace_default_scene);
BENCHMARK(BM_full_array_channel)->Arg(4)->Arg(64);

BENCHMARK_MAIN();
