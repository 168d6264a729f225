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

#include "chanforge/channel_synth.hpp"

#include "chanforge/errors.hpp"
#include "chanforge/kernels.hpp"
#include "chanforge/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace chanforge
{

std::string_view method_name(ChannelMethod m)
{
    return m == ChannelMethod::geometric ? "geometric" : "full";
}

ChannelMethod parse_method(std::string_view text)
{
    if (text == "geometric")
        return ChannelMethod::geometric;
    if (text == "full")
        return ChannelMethod::full;
    throw ValidationError("unknown channel method '" + std::string(text) + "'");
}

ChannelMatrix geometric_channel(const PairRecord &record, const ArrayConfig &tx_cfg, const ArrayConfig &rx_cfg,
                                std::size_t l, int jobs)
{
    tx_cfg.validate();
    rx_cfg.validate();
    if (!(record.frequency_hz > 0.0))
        throw ValidationError("pair " + record.key() + ": frequency_hz is not set");

    const double lambda = wavelength_m(record.frequency_hz);
    const PairRecord kept = select_top_l(record, l);
    const double scale = std::sqrt(static_cast<double>(tx_cfg.n_elements * rx_cfg.n_elements));

    std::vector<kernels::DyadTerm> terms;
    terms.reserve(kept.rays.size());
    for (const auto &r : kept.rays)
    {
        terms.push_back({scale * r.gain,
                         steering_vector(rx_cfg, Direction::from_degrees(r.aoa_az_deg, r.aoa_el_deg), lambda),
                         steering_vector(tx_cfg, Direction::from_degrees(r.aod_az_deg, r.aod_el_deg), lambda)});
    }

    ChannelMatrix h;
    h.entries = CMatrix(rx_cfg.n_elements, tx_cfg.n_elements);
    h.method = ChannelMethod::geometric;
    h.tx_cfg = tx_cfg;
    h.rx_cfg = rx_cfg;
    h.frequency_hz = record.frequency_hz;
    h.tx_id = record.tx_id;
    h.rx_id = record.rx_id;

    const int threads = effective_jobs(jobs);
    if (threads > 1)
        kernels::geometric_omp(terms, h.entries, threads);
    else
        kernels::geometric_serial(terms, h.entries);
    return h;
}

ChannelMatrix full_array_channel(std::span<const TracedPath> paths, const ArrayConfig &tx_cfg,
                                 const ArrayConfig &rx_cfg, double frequency_hz, const FullSimOptions &opts)
{
    tx_cfg.validate();
    rx_cfg.validate();
    if (!(frequency_hz > 0.0))
        throw ValidationError("frequency_hz must be > 0");

    const double lambda = wavelength_m(frequency_hz);
    const auto tx_elements = element_positions(tx_cfg, lambda);
    const auto rx_elements = element_positions(rx_cfg, lambda);

    std::vector<kernels::SphericalTerm> terms;
    terms.reserve(paths.size());
    for (const auto &path : paths)
    {
        if (path.points.size() != path.order() + 2 || !(path.length_m > 0.0))
            throw ValidationError("path lacks interaction geometry");
        kernels::SphericalTerm t;
        t.coeff = path.reflection;
        t.center_length_m = path.length_m;
        t.tx_images.reserve(tx_elements.size());
        for (Vec3 e : tx_elements)
        {
            for (const auto &pl : path.planes)
                e = pl.mirror(e);
            t.tx_images.push_back(e);
        }
        terms.push_back(std::move(t));
    }

    ChannelMatrix h;
    h.entries = CMatrix(rx_cfg.n_elements, tx_cfg.n_elements);
    h.method = ChannelMethod::full;
    h.tx_cfg = tx_cfg;
    h.rx_cfg = rx_cfg;
    h.frequency_hz = frequency_hz;

    const kernels::SphericalSettings settings{lambda, opts.phase_only};
    const int threads = effective_jobs(opts.jobs);
    if (threads > 1)
        kernels::spherical_omp(terms, rx_elements, settings, h.entries, threads);
    else
        kernels::spherical_serial(terms, rx_elements, settings, h.entries);
    return h;
}

double fresnel_error_bound(const ArrayConfig &tx_cfg, const ArrayConfig &rx_cfg, double distance_m,
                           double wavelength_m)
{
    if (!(wavelength_m > 0.0))
        throw ValidationError("wavelength must be > 0");
    const double apertures = aperture_m(tx_cfg, wavelength_m) + aperture_m(rx_cfg, wavelength_m);
    if (!(distance_m > apertures))
        throw ValidationError("distance must exceed the sum of the array apertures");
    const double phase = std::min(kPi, kPi * apertures * apertures / (2.0 * wavelength_m * distance_m));
    return 2.0 * std::sin(phase / 2.0);
}

} // namespace chanforge
