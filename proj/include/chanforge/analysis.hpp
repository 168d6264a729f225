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

#include "chanforge/canyon_tracer.hpp"
#include "chanforge/channel_synth.hpp"
#include "chanforge/cmatrix.hpp"

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace chanforge
{

// ------------------------------------------------------------------------
// Hermitian eigenvalues (cyclic Jacobi)

struct EigenStats
{
    int sweeps = 0;
    double off_diagonal_norm = 0.0; // Frobenius norm of the off-diagonal part at termination
};

// Eigenvalues of a Hermitian matrix, ascending. Iterates until the off-diagonal Frobenius mass
// drops below 1e-13 ||g||_F. Throws ValidationError for non-Hermitian input and NumericError if
// 100 sweeps are not enough.
std::vector<double> hermitian_eigenvalues(const CMatrix &g, EigenStats *stats = nullptr);

// ------------------------------------------------------------------------
// Capacity

enum class Normalization
{
    raw,
    frobenius, // scale H so that ||H||_F^2 = N_tx N_rx
};

std::string_view normalization_name(Normalization n);
Normalization parse_normalization(std::string_view text); // "raw", "frob" or "frobenius"

CMatrix normalized_entries(const CMatrix &h, Normalization n);

// log2 det(I + snr/N_tx H H^H), equal power allocation, from the eigenvalues of H H^H.
double capacity(const CMatrix &h, double snr_linear, Normalization n);
double capacity(const ChannelMatrix &h, double snr_linear, Normalization n);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// lo, lo + step, ..., up to and including hi (within step / 1e6).
std::vector<double> snr_grid_db(double lo, double hi, double step);

struct CapacityCurve
{
    std::string pair;
    ChannelMethod method = ChannelMethod::geometric;
    Normalization normalization = Normalization::frobenius;
    std::vector<double> snr_db;
    std::vector<double> capacity_bps_hz;
};

CapacityCurve capacity_curve(const ChannelMatrix &h, const std::vector<double> &snr_db, Normalization n);

// ------------------------------------------------------------------------
// Error between the two constructions

struct ErrorReport
{
    std::string pair;
    double raw_error_pct = 0.0;
    double aligned_error_pct = 0.0;
    double tx_rx_distance_m = std::numeric_limits<double>::quiet_NaN();
    bool los = true;
};

// Relative Frobenius error of a against the reference b, in percent, with and without the optimal
// global phase theta* = arg trace(b^H a). Throws ValidationError on dimension or pair mismatch, or when
// ||b||_F = 0.
ErrorReport channel_error(const ChannelMatrix &a, const ChannelMatrix &b);

// ------------------------------------------------------------------------
// Distance sweep

struct SweepConfig
{
    Scene scene;                  // template; its receivers are ignored
    std::vector<double> distances_m; // positive, ascending
    ArrayConfig tx_cfg;
    ArrayConfig rx_cfg;
    std::size_t top_l = kAllRays;
    std::vector<double> snr_db;
    Normalization normalization = Normalization::frobenius;
    bool drop_los = false;
    bool phase_only_full = false;
    int jobs = 1;
};

struct SweepPoint
{
    double distance_m = 0.0;
    ErrorReport error;
    CapacityCurve geometric;
    CapacityCurve full;
    double fresnel_bound = 0.0; // line-of-sight bound at this distance, NaN when not defined
};

// Receiver k is placed at tx + distances_m[k] * x_hat, i.e. on the street axis through the
// transmitter at the same height. Output is ordered by distance regardless of jobs.
std::vector<SweepPoint> distance_sweep(const SweepConfig &cfg);

} // namespace chanforge
