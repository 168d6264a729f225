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

#include "chanforge/geometry.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chanforge
{

// One propagation path as collected from a ray tracer. Angles are kept in degrees (the file unit);
// delay is kept in nanoseconds so that a parse/write cycle is lossless.
struct Ray
{
    Complex gain{0.0, 0.0}; // complex amplitude, propagation phase included
    double delay_ns = 0.0;
    double aod_az_deg = 0.0;
    double aod_el_deg = 0.0;
    double aoa_az_deg = 0.0;
    double aoa_el_deg = 0.0;
    int n_bounces = 0;
    std::optional<double> path_length_m;
    std::vector<Vec3> interactions; // empty, or exactly n_bounces points

    double delay_s() const { return delay_ns * 1e-9; }
    double power() const { return std::norm(gain); }

    friend bool operator==(const Ray &, const Ray &) = default;
};

// All rays of one (transmitter, receiver) pair plus the per-pair summaries.
struct PairRecord
{
    std::string tx_id;
    std::string rx_id;
    std::vector<Ray> rays;
    double mean_toa_s = 0.0; // power-weighted mean delay
    double p_tx_w = 1.0;
    double p_rx_w = 0.0;        // p_tx_w * sum |gain|^2
    double frequency_hz = 0.0;  // 0 when unknown

    std::string key() const { return tx_id + ":" + rx_id; }

    friend bool operator==(const PairRecord &, const PairRecord &) = default;
};

// Throws ValidationError naming the offending field.
void validate_ray(const Ray &ray);

// sum |gain|^2 in ray order
double total_ray_power(const std::vector<Ray> &rays);

// sum |g|^2 tau / sum |g|^2, 0 for an empty or powerless ray set
double power_weighted_mean_toa_s(const std::vector<Ray> &rays);

// Builds a record with the summaries computed from rays.
PairRecord make_pair_record(std::string tx_id, std::string rx_id, std::vector<Ray> rays, double p_tx_w,
                            double frequency_hz);

// Recomputes mean_toa_s and p_rx_w from the ray list.
void refresh_summaries(PairRecord &record);

// Keeps the l rays of largest |gain| (ties: smaller delay, then earlier index) in their original order.
PairRecord select_top_l(const PairRecord &record, std::size_t l);

// ------------------------------------------------------------------------
// File I/O
//
// Rays live in a CSV file; per-pair summaries live in a JSON sidecar next to it
// (rays.csv -> rays.summary.json) keyed by "tx_id:rx_id".

inline constexpr std::string_view kRayCsvHeader =
    "tx_id,rx_id,ray_idx,gain_re,gain_im,delay_ns,aod_az_deg,aod_el_deg,aoa_az_deg,aoa_el_deg,n_bounces,"
    "path_length_m,interactions";

std::filesystem::path summary_path_for(const std::filesystem::path &csv_path);

std::string format_rays_csv(const std::vector<PairRecord> &records);
std::string format_summary_json(const std::vector<PairRecord> &records);

// source_name is used in error messages only. summary_json may be empty (no sidecar): records then
// default to p_tx_w = 1 W and unknown frequency.
std::vector<PairRecord> parse_rays_text(std::string_view csv_text, std::string_view summary_json,
                                        std::string_view source_name = "<memory>");

std::vector<PairRecord> parse_rays(const std::filesystem::path &csv_path);
void write_rays(const std::vector<PairRecord> &records, const std::filesystem::path &csv_path);

} // namespace chanforge
