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
#include "chanforge/errors.hpp"
#include "oracles.hpp"

#include <random>

using namespace chanforge;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

ChannelMatrix wrap(CMatrix m)
{
    ChannelMatrix h;
    h.entries = std::move(m);
    h.tx_id = "TX1";
    h.rx_id = "RX1";
    h.frequency_hz = 60e9;
    return h;
}

ArrayConfig ula(std::size_t n)
{
    ArrayConfig c;
    c.n_elements = n;
    return c;
}

} // namespace

// ================================================================================================
// hermitian_eigenvalues
// ================================================================================================

TEST_CASE("hermitian_eigenvalues - examples")
{
    CMatrix d(3, 3);
    d(0, 0) = 3.0, d(1, 1) = 1.0, d(2, 2) = 2.0;
    CHECK(hermitian_eigenvalues(d) == std::vector<double>{1.0, 2.0, 3.0});

    CMatrix m(2, 2);
    m(0, 0) = 2.0, m(1, 1) = 2.0;
    m(0, 1) = Complex(0.0, 1.0), m(1, 0) = Complex(0.0, -1.0);
    const auto ev = hermitian_eigenvalues(m);
    REQUIRE(ev.size() == 2);
    CHECK_THAT(ev[0], WithinAbs(1.0, 1e-14));
    CHECK_THAT(ev[1], WithinAbs(3.0, 1e-14));

    CHECK(hermitian_eigenvalues(CMatrix(4, 4)) == std::vector<double>(4, 0.0));
    CHECK(hermitian_eigenvalues(CMatrix()).empty());
}

TEST_CASE("hermitian_eigenvalues - rejects non-Hermitian input")
{
    CMatrix m(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eigenvalues(m), ValidationError);
    CHECK_THROWS_AS(hermitian_eigenvalues(CMatrix(2, 3)), ValidationError);
    CMatrix c(1, 1);
    c(0, 0) = Complex(1.0, 0.5);
    CHECK_THROWS_AS(hermitian_eigenvalues(c), ValidationError);
}

TEST_CASE("hermitian_eigenvalues - trace, determinant and residual on random matrices")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial)
    {
        const std::size_t n = 1 + trial % 10;
        const CMatrix g = oracle::random_hermitian(rng, n);
        EigenStats stats;
        const auto ev = hermitian_eigenvalues(g, &stats);
        REQUIRE(ev.size() == n);
        CHECK(std::is_sorted(ev.begin(), ev.end()));
        CHECK(stats.off_diagonal_norm <= 1e-13 * g.frobenius_norm());
        CHECK(stats.sweeps <= 100);

        double trace = 0.0, prod = 1.0, sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            trace += g(i, i).real();
        for (double v : ev)
            sum += v, prod *= v;
        CHECK_THAT(sum, WithinAbs(trace, 1e-9 * g.frobenius_norm()));
        const Complex det = oracle::determinant(g);
        CHECK(std::abs(det.imag()) <= 1e-9 * std::abs(det));
        CHECK_THAT(prod, WithinRel(det.real(), 1e-9));
    }
}

TEST_CASE("hermitian_eigenvalues - squares of the singular values of a Gram matrix")
{
    std::mt19937_64 rng(12);
    const CMatrix h = oracle::random_matrix(rng, 5, 7);
    const auto ev = hermitian_eigenvalues(gram(h));
    const auto sv = oracle::singular_values(h);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK_THAT(ev[4 - i], WithinRel(sv[i] * sv[i], 1e-10));
}

// ================================================================================================
// capacity
// ================================================================================================

TEST_CASE("capacity - examples")
{
    CHECK(capacity(CMatrix(3, 2), 100.0, Normalization::raw) == 0.0);
    CHECK(capacity(CMatrix(3, 2), 100.0, Normalization::frobenius) == 0.0);
    CHECK_THAT(capacity(CMatrix::identity(2), 3.0, Normalization::raw), WithinRel(2.0 * std::log2(2.5), 1e-14));
    CHECK_THAT(capacity(CMatrix::identity(2), 3.0, Normalization::raw), WithinAbs(2.6439, 1e-4));
    CHECK(capacity(CMatrix::identity(2), 0.0, Normalization::raw) == 0.0);

    Ray r;
    r.gain = Complex(3e-6, -1e-6);
    r.aod_az_deg = 17.0;
    r.aoa_az_deg = -60.0;
    const auto h = geometric_channel(make_pair_record("TX1", "RX1", {r}, 1.0, 60e9), ula(4), ula(4));
    CHECK_THAT(capacity(h, 1.0, Normalization::frobenius), WithinRel(std::log2(5.0), 1e-12));
    CHECK_THAT(capacity(h, 1.0, Normalization::frobenius), WithinAbs(2.3219, 1e-4));
}

TEST_CASE("capacity - Frobenius normalization")
{
    std::mt19937_64 rng(13);
    const CMatrix h = oracle::random_matrix(rng, 3, 5);
    const CMatrix n = normalized_entries(h, Normalization::frobenius);
    CHECK_THAT(n.frobenius_norm() * n.frobenius_norm(), WithinRel(15.0, 1e-14));
    CHECK(normalized_entries(h, Normalization::raw) == h);
    CHECK_THAT(capacity(h * Complex(1e-5, 2e-5), 10.0, Normalization::frobenius),
               WithinRel(capacity(h, 10.0, Normalization::frobenius), 1e-12));
}

TEST_CASE("capacity - matches the direct log-det on random Hermitian-based cases")
{
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial)
    {
        const std::size_t nr = 1 + trial % 8, nt = 1 + (trial / 8) % 8;
        const CMatrix h = oracle::random_matrix(rng, nr, nt);
        const double snr = std::pow(10.0, -2.0 + 5.0 * u(rng));
        const double expected = oracle::logdet_capacity(gram(h), snr / static_cast<double>(nt));
        CHECK_THAT(capacity(h, snr, Normalization::raw), WithinRel(expected, 1e-9));
    }
}

TEST_CASE("capacity - monotone in SNR and non-negative")
{
    std::mt19937_64 rng(15);
    const CMatrix h = oracle::random_matrix(rng, 4, 4);
    double previous = 0.0;
    for (double db : snr_grid_db(-30.0, 40.0, 2.5))
    {
        const double c = capacity(h, db_to_linear(db), Normalization::frobenius);
        CHECK(c >= previous);
        previous = c;
    }
}

TEST_CASE("capacity - equal singular values maximize, rank one minimizes")
{
    // unitary DFT matrix: all singular values equal
    CMatrix dft(4, 4), rank1(4, 4), mixed(4, 4);
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = 0; q < 4; ++q)
        {
            dft(p, q) = std::polar(1.0, -2.0 * kPi * double(p * q) / 4.0);
            rank1(p, q) = double(p + 1) * Complex(1.0, double(q));
        }
    mixed(0, 0) = 3.0, mixed(1, 1) = 1.0, mixed(2, 2) = 0.5, mixed(3, 3) = 0.1;
    for (double snr : {0.1, 1.0, 10.0})
    {
        const double cmax = capacity(dft, snr, Normalization::frobenius);
        const double cmin = capacity(rank1, snr, Normalization::frobenius);
        const double c = capacity(mixed, snr, Normalization::frobenius);
        CHECK_THAT(cmax, WithinRel(4.0 * std::log2(1.0 + snr), 1e-12));
        CHECK_THAT(cmin, WithinRel(std::log2(1.0 + snr * 4.0), 1e-12));
        CHECK(cmin < c);
        CHECK(c < cmax);
    }
}

TEST_CASE("snr_grid_db - inclusive grid")
{
    const auto g = snr_grid_db(-10.0, 30.0, 5.0);
    REQUIRE(g.size() == 9);
    CHECK(g.front() == -10.0);
    CHECK(g.back() == 30.0);
    CHECK(snr_grid_db(0.0, 1.0, 0.1).size() == 11);
    CHECK(snr_grid_db(3.0, 3.0, 1.0) == std::vector<double>{3.0});
    CHECK_THROWS_AS(snr_grid_db(0.0, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(snr_grid_db(1.0, 0.0, 1.0), ValidationError);
}

TEST_CASE("capacity_curve - one value per grid point")
{
    const auto h = wrap(CMatrix::identity(3));
    const auto curve = capacity_curve(h, snr_grid_db(-10.0, 30.0, 5.0), Normalization::raw);
    CHECK(curve.pair == "TX1:RX1");
    CHECK(curve.capacity_bps_hz.size() == 9);
    CHECK_THAT(curve.capacity_bps_hz[2], WithinRel(3.0 * std::log2(1.0 + 1.0 / 3.0), 1e-14));
}

TEST_CASE("normalization names")
{
    CHECK(parse_normalization("raw") == Normalization::raw);
    CHECK(parse_normalization("frob") == Normalization::frobenius);
    CHECK(parse_normalization("frobenius") == Normalization::frobenius);
    CHECK(normalization_name(Normalization::frobenius) == "frob");
    CHECK_THROWS_AS(parse_normalization("peak"), ValidationError);
}

// ================================================================================================
// channel_error
// ================================================================================================

TEST_CASE("channel_error - examples")
{
    std::mt19937_64 rng(16);
    const auto b = wrap(oracle::random_matrix(rng, 3, 4));
    auto e = channel_error(b, b);
    CHECK(e.raw_error_pct == 0.0);
    CHECK(e.aligned_error_pct == 0.0);
    CHECK(e.pair == "TX1:RX1");

    e = channel_error(wrap(b.entries * std::polar(1.0, kPi / 4.0)), b);
    CHECK_THAT(e.raw_error_pct, WithinRel(200.0 * std::sin(kPi / 8.0), 1e-12));
    CHECK_THAT(e.raw_error_pct, WithinAbs(76.537, 1e-3));
    CHECK_THAT(e.aligned_error_pct, WithinAbs(0.0, 1e-12));

    e = channel_error(wrap(b.entries * Complex(2.0, 0.0)), b);
    CHECK_THAT(e.raw_error_pct, WithinRel(100.0, 1e-14));
    CHECK_THAT(e.aligned_error_pct, WithinRel(100.0, 1e-14));
}

TEST_CASE("channel_error - preconditions")
{
    const auto b = wrap(CMatrix::identity(2));
    CHECK_THROWS_AS(channel_error(wrap(CMatrix(2, 3)), b), ValidationError);
    CHECK_THROWS_AS(channel_error(b, wrap(CMatrix(2, 2))), ValidationError);
    auto other = b;
    other.rx_id = "RX2";
    CHECK_THROWS_AS(channel_error(other, b), ValidationError);
}

TEST_CASE("channel_error - alignment beats a one-degree grid and never exceeds raw")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial)
    {
        const std::size_t r = 1 + trial % 6, c = 1 + trial % 5;
        const auto a = wrap(oracle::random_matrix(rng, r, c));
        const auto b = wrap(oracle::random_matrix(rng, r, c));
        const auto e = channel_error(a, b);
        CHECK(e.aligned_error_pct <= oracle::brute_force_aligned_error_pct(a.entries, b.entries) + 1e-12);
        CHECK(e.aligned_error_pct >= 0.0);
        CHECK(e.aligned_error_pct <= e.raw_error_pct);
    }
}

TEST_CASE("channel_error - invariant to a common complex scale")
{
    std::mt19937_64 rng(18);
    const auto a = wrap(oracle::random_matrix(rng, 4, 4));
    const auto b = wrap(oracle::random_matrix(rng, 4, 4));
    const auto ref = channel_error(a, b);
    for (Complex s : {Complex(3.0, 0.0), Complex(-1e-6, 2e-6), std::polar(1e4, 2.0)})
    {
        const auto e = channel_error(wrap(a.entries * s), wrap(b.entries * s));
        CHECK_THAT(e.raw_error_pct, WithinAbs(ref.raw_error_pct, 1e-12 * ref.raw_error_pct));
        CHECK_THAT(e.aligned_error_pct, WithinAbs(ref.aligned_error_pct, 1e-12 * ref.aligned_error_pct));
    }
}

// ================================================================================================
// distance_sweep
// ================================================================================================

namespace
{

SweepConfig los_sweep(std::vector<double> distances)
{
    SweepConfig cfg;
    cfg.scene = Scene::default_scene();
    cfg.scene.max_order = 0;
    cfg.distances_m = std::move(distances);
    cfg.tx_cfg = ula(4);
    cfg.rx_cfg = ula(4);
    cfg.snr_db = snr_grid_db(-10.0, 30.0, 5.0);
    return cfg;
}

} // namespace

TEST_CASE("distance_sweep - LOS errors decrease and respect the bound")
{
    const auto pts = distance_sweep(los_sweep({1.0, 10.0, 100.0}));
    REQUIRE(pts.size() == 3);
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        CHECK(pts[i].error.pair == "TX1:RX" + std::to_string(i + 1));
        CHECK(pts[i].error.los);
        CHECK(pts[i].error.tx_rx_distance_m == pts[i].distance_m);
        CHECK(pts[i].error.aligned_error_pct / 100.0 <= pts[i].fresnel_bound * (1.0 + 1e-6));
        CHECK(pts[i].geometric.capacity_bps_hz.size() == 9);
        CHECK(pts[i].full.method == ChannelMethod::full);
        if (i > 0)
            CHECK(pts[i].error.aligned_error_pct < pts[i - 1].error.aligned_error_pct);
    }
}

TEST_CASE("distance_sweep - a single point equals the direct composition")
{
    SweepConfig cfg = los_sweep({7.0});
    cfg.scene.max_order = 2;
    const auto pts = distance_sweep(cfg);
    REQUIRE(pts.size() == 1);

    Scene s = cfg.scene;
    s.rx_list = {{"RX1", s.tx + Vec3{7.0, 0.0, 0.0}}};
    const auto geo = geometric_channel(trace_pair(s, "RX1"), cfg.tx_cfg, cfg.rx_cfg);
    auto full = full_array_channel(trace_paths(s, s.rx_list[0].position), cfg.tx_cfg.at(s.tx),
                                   cfg.rx_cfg.at(s.rx_list[0].position), s.frequency_hz);
    full.tx_id = geo.tx_id, full.rx_id = geo.rx_id;
    const auto e = channel_error(geo, full);
    CHECK(pts[0].error.raw_error_pct == e.raw_error_pct);
    CHECK(pts[0].error.aligned_error_pct == e.aligned_error_pct);
}

TEST_CASE("distance_sweep - job count does not change the output")
{
    SweepConfig cfg = los_sweep({2.0, 4.0, 8.0, 16.0});
    cfg.scene.max_order = 2;
    const auto a = distance_sweep(cfg);
    cfg.jobs = 3;
    const auto b = distance_sweep(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(a[i].error.aligned_error_pct == b[i].error.aligned_error_pct);
        CHECK(a[i].full.capacity_bps_hz == b[i].full.capacity_bps_hz);
    }
}

TEST_CASE("distance_sweep - rejects bad grids")
{
    CHECK_THROWS_AS(distance_sweep(los_sweep({})), ValidationError);
    CHECK_THROWS_AS(distance_sweep(los_sweep({5.0, 5.0})), ValidationError);
    CHECK_THROWS_AS(distance_sweep(los_sweep({-1.0, 5.0})), ValidationError);
}
