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

#include <catch_amalgamated.hpp>

#include "chanforge/analysis.hpp"
#include "chanforge/channel_synth.hpp"
#include "chanforge/errors.hpp"
#include "oracles.hpp"

#include <random>

using namespace chanforge;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

Ray ray(Complex g, double aod_az, double aoa_az, double delay_ns = 100.0)
{
    Ray r;
    r.gain = g;
    r.delay_ns = delay_ns;
    r.aod_az_deg = aod_az;
    r.aoa_az_deg = aoa_az;
    return r;
}

PairRecord record(std::vector<Ray> rays)
{
    return make_pair_record("TX1", "RX1", std::move(rays), 1.0, 60e9);
}

ArrayConfig ula(std::size_t n, Vec3 axis = {0.0, 1.0, 0.0})
{
    ArrayConfig c;
    c.n_elements = n;
    c.axis = axis;
    return c;
}

PairRecord random_record(std::mt19937_64 &rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Ray> rays;
    for (std::size_t i = 0; i < n; ++i)
    {
        Ray r = ray({u(rng), u(rng)}, 180.0 * u(rng), 180.0 * u(rng), 100.0 + 50.0 * (u(rng) + 1.0));
        r.aod_el_deg = 60.0 * u(rng);
        r.aoa_el_deg = 60.0 * u(rng);
        rays.push_back(r);
    }
    return record(std::move(rays));
}

Scene los_scene(double d)
{
    Scene s;
    s.max_order = 0;
    s.rx_list = {{"RX1", s.tx + Vec3{d, 0.0, 0.0}}};
    return s;
}

} // namespace

// ================================================================================================
// geometric_channel
// ================================================================================================

TEST_CASE("geometric_channel - L = 0 gives the zero matrix")
{
    const auto h = geometric_channel(record({ray(1.0, 0.0, 0.0)}), ula(4), ula(3), 0);
    CHECK(h.n_rx() == 3);
    CHECK(h.n_tx() == 4);
    CHECK(h.entries.max_abs() == 0.0);
    CHECK(h.method == ChannelMethod::geometric);
    CHECK(h.pair_key() == "TX1:RX1");
}

TEST_CASE("geometric_channel - single broadside ray gives the all-ones matrix")
{
    const auto h = geometric_channel(record({ray(1.0, 0.0, 0.0)}), ula(4), ula(4));
    for (auto v : h.entries.values())
        CHECK_THAT(std::abs(v - Complex(1.0, 0.0)), WithinAbs(0.0, 1e-15));
    CHECK_THAT(h.entries.frobenius_norm(), WithinRel(4.0, 1e-15));
}

TEST_CASE("geometric_channel - requires a frequency")
{
    PairRecord r = record({ray(1.0, 0.0, 0.0)});
    r.frequency_hz = 0.0;
    CHECK_THROWS_AS(geometric_channel(r, ula(2), ula(2)), ValidationError);
}

TEST_CASE("geometric_channel - single path is rank one with the Frobenius law")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial)
    {
        const PairRecord r = random_record(rng, 1);
        const std::size_t nt = 1 + trial % 7, nr = 2 + trial % 5;
        const auto h = geometric_channel(r, ula(nt, normalized(Vec3{0.3, 0.9, 0.1})), ula(nr, {0.0, 0.0, 1.0}));
        const auto sv = oracle::singular_values(h.entries);
        if (sv.size() > 1)
            CHECK(sv[1] / sv[0] < 1e-10);
        CHECK_THAT(h.entries.frobenius_norm(),
                   WithinRel(std::sqrt(double(nt * nr)) * std::abs(r.rays[0].gain), 1e-12));
    }
}

TEST_CASE("geometric_channel - Dirichlet-orthogonal rays are resolved")
{
    // sin(30 deg) - sin(0) = 1/2 = 2/N for N = 4 at half-wavelength spacing
    const auto equal = geometric_channel(record({ray(1.0, 0.0, 0.0), ray(Complex(0.0, 1.0), 30.0, 30.0)}), ula(4),
                                         ula(4));
    auto sv = oracle::singular_values(equal.entries);
    CHECK_THAT(sv[0], WithinAbs(4.0, 1e-10));
    CHECK_THAT(sv[1], WithinAbs(4.0, 1e-10));
    CHECK(sv[2] < 1e-10);

    const auto unequal =
        geometric_channel(record({ray(1.0, 0.0, 0.0), ray(Complex(0.3, -0.4), 30.0, 30.0)}), ula(4), ula(4));
    sv = oracle::singular_values(unequal.entries);
    CHECK_THAT(sv[0], WithinAbs(4.0, 1e-10));
    CHECK_THAT(sv[1], WithinAbs(2.0, 1e-10));
    CHECK(sv[2] / sv[0] < 1e-10);
}

TEST_CASE("geometric_channel - coincident angles collapse to rank one")
{
    const auto h =
        geometric_channel(record({ray(1.0, 20.0, -40.0), ray(Complex(-0.2, 0.7), 20.0, -40.0)}), ula(6), ula(5));
    const auto sv = oracle::singular_values(h.entries);
    CHECK(sv[1] / sv[0] < 1e-10);
}

TEST_CASE("geometric_channel - linear in the ray set")
{
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial)
    {
        std::vector<Ray> strongest = random_record(rng, 8).rays;
        std::sort(strongest.begin(), strongest.end(),
                  [](const Ray &a, const Ray &b) { return std::abs(a.gain) > std::abs(b.gain); });
        const PairRecord all = record(strongest);
        const PairRecord head = record({strongest.begin(), strongest.end() - 1});
        const PairRecord tail = record({strongest.back()});
        const auto h = geometric_channel(all, ula(5), ula(4));
        const auto sum = geometric_channel(head, ula(5), ula(4)).entries + geometric_channel(tail, ula(5), ula(4)).entries;
        CHECK(h.entries == sum);

        const PairRecord odd = record({all.rays[1], all.rays[3], all.rays[5], all.rays[7]});
        const PairRecord even = record({all.rays[0], all.rays[2], all.rays[4], all.rays[6]});
        const auto split = geometric_channel(odd, ula(5), ula(4)).entries + geometric_channel(even, ula(5), ula(4)).entries;
        CHECK((h.entries - split).frobenius_norm() <= 1e-12 * h.entries.frobenius_norm());
    }
}

TEST_CASE("geometric_channel - a global phase on the gains is a global phase on H")
{
    std::mt19937_64 rng(7);
    PairRecord r = random_record(rng, 5);
    const auto h = geometric_channel(r, ula(4), ula(4));
    const Complex rot = std::polar(1.0, 1.234);
    for (auto &ray : r.rays)
        ray.gain *= rot;
    const auto g = geometric_channel(r, ula(4), ula(4));
    CHECK((g.entries - h.entries * rot).frobenius_norm() <= 1e-14 * h.entries.frobenius_norm());
    CHECK_THAT(channel_error(g, h).aligned_error_pct, WithinAbs(0.0, 1e-12));
}

TEST_CASE("geometric_channel - top-L keeps the strongest rays")
{
    const PairRecord r = record({ray(0.1, 0.0, 0.0), ray(1.0, 30.0, 30.0), ray(0.5, -30.0, 10.0)});
    const auto h2 = geometric_channel(r, ula(4), ula(4), 2);
    const auto ref = geometric_channel(record({ray(1.0, 30.0, 30.0), ray(0.5, -30.0, 10.0)}), ula(4), ula(4));
    CHECK((h2.entries - ref.entries).frobenius_norm() <= 1e-15);
    CHECK(geometric_channel(r, ula(4), ula(4), 99).entries == geometric_channel(r, ula(4), ula(4)).entries);
}

TEST_CASE("geometric_channel - OpenMP path is bitwise identical")
{
    std::mt19937_64 rng(8);
    const PairRecord r = random_record(rng, 12);
    CHECK(geometric_channel(r, ula(16), ula(32), kAllRays, 1).entries ==
          geometric_channel(r, ula(16), ula(32), kAllRays, 4).entries);
}

// ================================================================================================
// full_array_channel
// ================================================================================================

TEST_CASE("full_array_channel - single elements reduce to the scalar ray sum")
{
    Scene s = Scene::default_scene();
    const Vec3 rx = s.rx_list[2].position;
    const auto paths = trace_paths(s, rx);
    const auto h = full_array_channel(paths, ula(1).at(s.tx), ula(1).at(rx), s.frequency_hz);
    Complex sum = 0.0;
    double scale = 0.0;
    for (const auto &p : paths)
        sum += p.gain, scale += std::abs(p.gain);
    REQUIRE(h.n_rx() == 1);
    CHECK_THAT(std::abs(h.entries(0, 0) - sum), WithinAbs(0.0, 1e-9 * scale));
    CHECK(h.method == ChannelMethod::full);
}

TEST_CASE("full_array_channel - endfire elements see exact collinear distances")
{
    const double d = 10.0;
    const Scene s = los_scene(d);
    const double lambda = s.wavelength();
    const double sp = 0.5 * lambda;
    const ArrayConfig axis_x = ula(2, {1.0, 0.0, 0.0});
    const auto h = full_array_channel(trace_paths(s, s.rx_list[0].position), axis_x.at(s.tx),
                                      axis_x.at(s.rx_list[0].position), s.frequency_hz);
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
        {
            const double dpq = d - sp * q + sp * p;
            const Complex expected = lambda / (4.0 * kPi * dpq) * std::exp(Complex(0.0, -2.0 * kPi * dpq / lambda));
            CHECK_THAT(std::abs(h.entries(p, q) - expected), WithinAbs(0.0, 1e-9 * std::abs(expected)));
        }
    // adjacent entries differ in phase by exactly one half-wavelength step (pi)
    CHECK_THAT(std::abs(std::arg(h.entries(0, 0) / h.entries(0, 1)) ), WithinAbs(kPi, 1e-9));
    CHECK_THAT(std::abs(std::arg(h.entries(1, 0) / h.entries(0, 0))), WithinAbs(kPi, 1e-9));
}

TEST_CASE("full_array_channel - far-field LOS agrees with the geometric channel")
{
    const Scene s = los_scene(100.0);
    const Vec3 rx = s.rx_list[0].position;
    const auto paths = trace_paths(s, rx);
    auto full = full_array_channel(paths, ula(4).at(s.tx), ula(4).at(rx), s.frequency_hz);
    full.tx_id = "TX1", full.rx_id = "RX1";
    const auto geo = geometric_channel(trace_pair(s, "RX1"), ula(4), ula(4));
    const auto err = channel_error(geo, full);
    CHECK(err.aligned_error_pct < 0.05);
    CHECK(err.aligned_error_pct / 100.0 <=
          fresnel_error_bound(ula(4), ula(4), 100.0, s.wavelength()) * (1.0 + 1e-6));
}

TEST_CASE("full_array_channel - phase-only mode keeps the path-centre amplitude")
{
    const Scene s = los_scene(3.0);
    const Vec3 rx = s.rx_list[0].position;
    const auto paths = trace_paths(s, rx);
    const auto h = full_array_channel(paths, ula(8).at(s.tx), ula(8).at(rx), s.frequency_hz, {true, 1});
    const double amp = s.wavelength() / (4.0 * kPi * 3.0);
    for (auto v : h.entries.values())
        CHECK_THAT(std::abs(v), WithinRel(amp, 1e-12));
}

TEST_CASE("full_array_channel - OpenMP path is bitwise identical")
{
    const Scene s = Scene::default_scene();
    const Vec3 rx = s.rx_list[0].position;
    const auto paths = trace_paths(s, rx);
    const auto a = full_array_channel(paths, ula(16).at(s.tx), ula(16).at(rx), s.frequency_hz, {false, 1});
    const auto b = full_array_channel(paths, ula(16).at(s.tx), ula(16).at(rx), s.frequency_hz, {false, 3});
    CHECK(a.entries == b.entries);
}

TEST_CASE("full_array_channel - paths without geometry are rejected")
{
    const Scene s = Scene::default_scene();
    auto paths = trace_paths(s, s.rx_list[0].position);
    auto it = std::find_if(paths.begin(), paths.end(), [](const TracedPath &p) { return p.order() > 0; });
    REQUIRE(it != paths.end());
    it->points.resize(2);
    CHECK_THROWS_AS(full_array_channel(paths, ula(2).at(s.tx), ula(2).at(s.rx_list[0].position), 60e9),
                    ValidationError);
}

// ================================================================================================
// fresnel_error_bound
// ================================================================================================

TEST_CASE("fresnel_error_bound - values")
{
    CHECK(fresnel_error_bound(ula(1), ula(1), 1.0, 0.005) == 0.0);
    const double lambda = 0.005;
    const double phase1 = kPi * (3.0 * lambda) * (3.0 * lambda) / (2.0 * lambda * 1.0);
    CHECK_THAT(phase1, WithinRel(4.5 * kPi * lambda, 1e-14));
    CHECK_THAT(fresnel_error_bound(ula(4), ula(4), 1.0, lambda), WithinRel(2.0 * std::sin(phase1 / 2.0), 1e-14));
    CHECK_THAT(fresnel_error_bound(ula(4), ula(4), 1.0, lambda), WithinAbs(0.0707, 1e-4));
    CHECK_THAT(fresnel_error_bound(ula(4), ula(4), 100.0, lambda), WithinAbs(7.07e-4, 1e-6));
    // saturates at 2 for very short ranges
    CHECK_THAT(fresnel_error_bound(ula(64), ula(64), 0.4, lambda), WithinAbs(2.0, 1e-15));
}

TEST_CASE("fresnel_error_bound - distance must exceed the apertures")
{
    CHECK_THROWS_AS(fresnel_error_bound(ula(4), ula(4), 0.015, 0.005), ValidationError);
    CHECK_THROWS_AS(fresnel_error_bound(ula(4), ula(4), 0.01, 0.005), ValidationError);
    CHECK_NOTHROW(fresnel_error_bound(ula(4), ula(4), 0.0151, 0.005));
}

TEST_CASE("far-field convergence over a distance ladder")
{
    double previous = 1e300;
    for (double d : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0})
    {
        const Scene s = los_scene(d);
        const Vec3 rx = s.rx_list[0].position;
        auto full = full_array_channel(trace_paths(s, rx), ula(4).at(s.tx), ula(4).at(rx), s.frequency_hz);
        full.tx_id = "TX1", full.rx_id = "RX1";
        const auto geo = geometric_channel(trace_pair(s, "RX1"), ula(4), ula(4));
        const double e = channel_error(geo, full).aligned_error_pct;
        CHECK(e <= previous);
        CHECK(e / 100.0 <= fresnel_error_bound(ula(4), ula(4), d, s.wavelength()) * (1.0 + 1e-6));
        previous = e;
    }
}
