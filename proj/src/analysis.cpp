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

#include "chanforge/analysis.hpp"

#include "chanforge/errors.hpp"
#include "chanforge/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace chanforge
{

namespace
{

double off_diagonal_norm(const CMatrix &a)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j)
                s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Zeroes a(p, q) with the unitary J = [[c, s e], [-s conj(e), c]], e = a_pq / |a_pq|, applied as
// J^H A J. The real rotation parameters follow the classical symmetric Jacobi formulas on
// (a_pp, a_qq, |a_pq|).
void rotate(CMatrix &a, std::size_t p, std::size_t q)
{
    const Complex apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0)
        return;
    const Complex e = apq / mag;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();

    const double theta = (aqq - app) / (2.0 * mag);
    double t;
    if (std::abs(theta) > 1e150)
        t = 0.5 / theta;
    else
        t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const Complex se = s * e;
    const Complex sec = s * std::conj(e);

    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) // columns: A J
    {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = c * akp - sec * akq;
        a(k, q) = se * akp + c * akq;
    }
    for (std::size_t k = 0; k < n; ++k) // rows: J^H A
    {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = c * apk - se * aqk;
        a(q, k) = sec * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = app - t * mag;
    a(q, q) = aqq + t * mag;
}

} // namespace

std::vector<double> hermitian_eigenvalues(const CMatrix &g, EigenStats *stats)
{
    const std::size_t n = g.rows();
    if (g.cols() != n)
        throw ValidationError("eigenvalues need a square matrix");
    const double max_abs = g.max_abs();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (!(std::abs(g(i, j) - std::conj(g(j, i))) <= 1e-12 * max_abs))
                throw ValidationError("matrix is not Hermitian");

    CMatrix a = g;
    for (std::size_t i = 0; i < n; ++i)
        a(i, i) = a(i, i).real();

    const double tol = 1e-13 * g.frobenius_norm();
    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    double off = off_diagonal_norm(a);
    while (off > tol)
    {
        if (sweep == kMaxSweeps)
            throw NumericError("Jacobi eigenvalue iteration did not converge in 100 sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                rotate(a, p, q);
        ++sweep;
        off = off_diagonal_norm(a);
    }

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i)
        values[i] = a(i, i).real();
    std::sort(values.begin(), values.end());
    if (stats != nullptr)
        *stats = {sweep, off};
    return values;
}

// ------------------------------------------------------------------------

std::string_view normalization_name(Normalization n)
{
    return n == Normalization::raw ? "raw" : "frob";
}

Normalization parse_normalization(std::string_view text)
{
    if (text == "raw")
        return Normalization::raw;
    if (text == "frob" || text == "frobenius")
        return Normalization::frobenius;
    throw ValidationError("unknown normalization '" + std::string(text) + "' (raw|frob)");
}

CMatrix normalized_entries(const CMatrix &h, Normalization n)
{
    if (n == Normalization::raw)
        return h;
    const double fro = h.frobenius_norm();
    if (fro == 0.0)
        return h;
    const double target = std::sqrt(static_cast<double>(h.rows() * h.cols()));
    return h * Complex(target / fro, 0.0);
}

double capacity(const CMatrix &h, double snr_linear, Normalization n)
{
    if (!(snr_linear >= 0.0))
        throw ValidationError("snr must be >= 0");
    if (h.cols() == 0 || h.rows() == 0)
        return 0.0;
    const CMatrix hn = normalized_entries(h, n);
    const double c = snr_linear / static_cast<double>(h.cols());
    double bits = 0.0;
    for (double lambda : hermitian_eigenvalues(gram(hn)))
        bits += std::log1p(c * std::max(lambda, 0.0));
    return bits / std::log(2.0);
}

double capacity(const ChannelMatrix &h, double snr_linear, Normalization n)
{
    return capacity(h.entries, snr_linear, n);
}

std::vector<double> snr_grid_db(double lo, double hi, double step)
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(step > 0.0) || hi < lo)
        throw ValidationError("SNR grid needs lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-6)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = lo + static_cast<double>(i) * step;
    return grid;
}

CapacityCurve capacity_curve(const ChannelMatrix &h, const std::vector<double> &snr_db, Normalization n)
{
    CapacityCurve curve;
    curve.pair = h.pair_key();
    curve.method = h.method;
    curve.normalization = n;
    curve.snr_db = snr_db;
    curve.capacity_bps_hz.reserve(snr_db.size());
    for (double db : snr_db)
        curve.capacity_bps_hz.push_back(capacity(h.entries, db_to_linear(db), n));
    return curve;
}

// ------------------------------------------------------------------------

ErrorReport channel_error(const ChannelMatrix &a, const ChannelMatrix &b)
{
    if (a.n_rx() != b.n_rx() || a.n_tx() != b.n_tx())
        throw ValidationError("channel_error: dimension mismatch for " + a.pair_key());
    if (a.tx_id != b.tx_id || a.rx_id != b.rx_id)
        throw ValidationError("channel_error: pair mismatch " + a.pair_key() + " vs " + b.pair_key());
    const double ref = b.entries.frobenius_norm();
    if (!(ref > 0.0))
        throw ValidationError("channel_error: reference channel " + b.pair_key() + " is zero");

    ErrorReport r;
    r.pair = a.pair_key();
    r.raw_error_pct = 100.0 * (a.entries - b.entries).frobenius_norm() / ref;
    const double theta = std::arg(inner_product(b.entries, a.entries));
    const CMatrix aligned = a.entries * std::polar(1.0, -theta);
    r.aligned_error_pct = std::min(r.raw_error_pct, 100.0 * (aligned - b.entries).frobenius_norm() / ref);
    return r;
}

// ------------------------------------------------------------------------

std::vector<SweepPoint> distance_sweep(const SweepConfig &cfg)
{
    if (cfg.distances_m.empty())
        throw ValidationError("sweep needs at least one distance");
    for (std::size_t i = 0; i < cfg.distances_m.size(); ++i)
    {
        const double d = cfg.distances_m[i];
        if (!(d > 0.0) || !std::isfinite(d) || (i > 0 && !(d > cfg.distances_m[i - 1])))
            throw ValidationError("sweep distances must be positive and strictly ascending");
    }
    cfg.tx_cfg.validate();
    cfg.rx_cfg.validate();
    Scene base = cfg.scene;
    base.rx_list.clear();
    base.validate();

    const double lambda = base.wavelength();
    std::vector<SweepPoint> points(cfg.distances_m.size());
    parallel_for(points.size(), cfg.jobs, [&](std::size_t i) {
        const double d = cfg.distances_m[i];
        Scene scene = base;
        const Receiver rx{"RX" + std::to_string(i + 1), base.tx + Vec3{d, 0.0, 0.0}};
        scene.rx_list = {rx};
        scene.validate();

        const auto paths = trace_paths(scene, rx.position, {cfg.drop_los});
        std::vector<Ray> rays;
        rays.reserve(paths.size());
        for (const auto &p : paths)
            rays.push_back(ray_from_path(p));
        const PairRecord record = make_pair_record(scene.tx_id, rx.id, std::move(rays), 1.0, scene.frequency_hz);

        const ArrayConfig txc = cfg.tx_cfg.at(scene.tx);
        const ArrayConfig rxc = cfg.rx_cfg.at(rx.position);
        const ChannelMatrix geo = geometric_channel(record, txc, rxc, cfg.top_l);
        ChannelMatrix full = full_array_channel(paths, txc, rxc, scene.frequency_hz, {cfg.phase_only_full, 1});
        full.tx_id = scene.tx_id;
        full.rx_id = rx.id;

        SweepPoint &pt = points[i];
        pt.distance_m = d;
        pt.error = channel_error(geo, full);
        pt.error.tx_rx_distance_m = d;
        pt.error.los = !cfg.drop_los;
        pt.geometric = capacity_curve(geo, cfg.snr_db, cfg.normalization);
        pt.full = capacity_curve(full, cfg.snr_db, cfg.normalization);
        const double apertures = aperture_m(txc, lambda) + aperture_m(rxc, lambda);
        pt.fresnel_bound = d > apertures ? fresnel_error_bound(txc, rxc, d, lambda)
                                         : std::numeric_limits<double>::quiet_NaN();
    });
    return points;
}

} // namespace chanforge
