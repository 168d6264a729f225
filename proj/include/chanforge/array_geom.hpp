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
#include <string>
#include <string_view>
#include <vector>

namespace chanforge
{

// Uniform linear array. Element k sits at reference + k * spacing_wl * wavelength * axis.
struct ArrayConfig
{
    std::size_t n_elements = 1;
    double spacing_wl = 0.5;
    Vec3 axis{0.0, 1.0, 0.0};
    Vec3 reference{}; // element 0, also the phase reference

    void validate() const;
    ArrayConfig at(const Vec3 &ref) const
    {
        ArrayConfig c = *this;
        c.reference = ref;
        return c;
    }

    friend bool operator==(const ArrayConfig &, const ArrayConfig &) = default;
};

// Azimuth from +x towards +y, elevation from the horizontal plane.
struct Direction
{
    double az_rad = 0.0; // (-pi, pi]
    double el_rad = 0.0; // [-pi/2, pi/2]

    Vec3 unit() const;

    static Direction from_vector(const Vec3 &v);
    static Direction from_degrees(double az_deg, double el_deg);
};

double rad_to_deg(double rad);
double deg_to_rad(double deg);

// Wraps into (-180, 180].
double wrap_azimuth_deg(double deg);

// Parses "ula:<n>:<spacing_wl>:<axis>" where axis is x, y, z or "ux,uy,uz" (optionally in <>).
// The axis is normalized; the reference is left at the origin.
ArrayConfig parse_array_descriptor(std::string_view text);
std::string format_array_descriptor(const ArrayConfig &cfg);

std::vector<Vec3> element_positions(const ArrayConfig &cfg, double wavelength_m);

// (n - 1) * spacing_wl * wavelength
double aperture_m(const ArrayConfig &cfg, double wavelength_m);

// Component k = exp(-j (2 pi / lambda) <p_k - reference, u>) / sqrt(n).
std::vector<Complex> steering_vector(const ArrayConfig &cfg, const Direction &dir, double wavelength_m);

} // namespace chanforge
