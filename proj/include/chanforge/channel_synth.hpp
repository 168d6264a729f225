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

#pragma once

#include "chanforge/array_geom.hpp"
#include "chanforge/canyon_tracer.hpp"
#include "chanforge/cmatrix.hpp"
#include "chanforge/ray_model.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>

namespace chanforge
{

enum class ChannelMethod
{
    geometric,
    full,
};

std::string_view method_name(ChannelMethod m);
ChannelMethod parse_method(std::string_view text);

// N_rx x N_tx channel for one (tx, rx) pair.
struct ChannelMatrix
{
    CMatrix entries;
    ChannelMethod method = ChannelMethod::geometric;
    ArrayConfig tx_cfg;
    ArrayConfig rx_cfg;
    double frequency_hz = 0.0;
    std::string tx_id;
    std::string rx_id;

    std::size_t n_rx() const { return entries.rows(); }
    std::size_t n_tx() const { return entries.cols(); }
    std::string pair_key() const { return tx_id + ":" + rx_id; }
};

inline constexpr std::size_t kAllRays = std::numeric_limits<std::size_t>::max();

// H = sqrt(N_tx N_rx) * sum_l alpha_l a_rx(aoa_l) a_tx(aod_l)^H over the l strongest rays.
// jobs > 1 uses the OpenMP kernel; the result is bitwise identical to jobs = 1.
ChannelMatrix geometric_channel(const PairRecord &record, const ArrayConfig &tx_cfg, const ArrayConfig &rx_cfg,
                                std::size_t l = kAllRays, int jobs = 1);

struct FullSimOptions
{
    bool phase_only = false; // per-element phase, path-centre amplitude
    int jobs = 1;
};

// Per-element spherical-wave superposition: every TX element is imaged through the path's plane
// sequence and its exact distance to every RX element gives amplitude and phase. Array references
// must sit at the path end points. Pair ids are left empty.
ChannelMatrix full_array_channel(std::span<const TracedPath> paths, const ArrayConfig &tx_cfg,
                                 const ArrayConfig &rx_cfg, double frequency_hz, const FullSimOptions &opts = {});

// Upper bound on the phase-aligned relative Frobenius error between the full and geometric channels
// of a single line-of-sight path: 2 sin(min(pi, pi (A_t + A_r)^2 / (2 lambda d)) / 2) with A the array
// apertures. Throws ValidationError when distance_m <= A_t + A_r.
double fresnel_error_bound(const ArrayConfig &tx_cfg, const ArrayConfig &rx_cfg, double distance_m,
                           double wavelength_m);

} // namespace chanforge
