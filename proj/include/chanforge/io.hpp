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

#include "chanforge/analysis.hpp"
#include "chanforge/canyon_tracer.hpp"
#include "chanforge/channel_synth.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace chanforge
{

// %.17g, the canonical number format of every text output.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, std::string_view contents);

// FNV-1a, 64 bit, as 16 lowercase hex digits.
std::string content_hash(std::string_view bytes);

// Scene JSON. Absent keys take the default-scene values; unknown keys are rejected.
Scene parse_scene_json(std::string_view text);
Scene load_scene(const std::filesystem::path &path);
std::string scene_to_json(const Scene &scene);

// Channel set JSON: array of {pair, method, n_rx, n_tx, frequency_hz, array_tx, array_rx,
// entries_re, entries_im}, entries row-major with 17 significant digits.
std::string format_channel_set(const std::vector<ChannelMatrix> &channels);
std::vector<ChannelMatrix> parse_channel_set(std::string_view text);

// errors.csv: pair,distance_m,los,raw_error_pct,aligned_error_pct
std::string format_errors_csv(const std::vector<ErrorReport> &reports);
// capacity.csv: pair,method,snr_db,capacity_bps_hz
std::string format_capacity_csv(const std::vector<CapacityCurve> &curves);
// sweep.csv: pair,distance_m,los,raw_error_pct,aligned_error_pct,fresnel_bound_pct
std::string format_sweep_csv(const std::vector<SweepPoint> &points);

} // namespace chanforge
