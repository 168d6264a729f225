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

// Small text helpers shared by the file formats.

#include <string>
#include <string_view>
#include <vector>

namespace chanforge::text
{

std::string format_double(double v);

std::vector<std::string_view> split(std::string_view s, char sep);

// Splits into lines on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> lines(std::string_view s);

// Whole-field parses; return false on any trailing garbage.
bool parse_double(std::string_view s, double &out);
bool parse_long(std::string_view s, long long &out);

} // namespace chanforge::text
