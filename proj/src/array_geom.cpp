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

#include "chanforge/array_geom.hpp"

#include "chanforge/errors.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>

namespace chanforge
{

void ArrayConfig::validate() const
{
    if (n_elements < 1)
        throw ValidationError("array needs at least one element");
    if (!(spacing_wl > 0.0) || !std::isfinite(spacing_wl))
        throw ValidationError("array spacing must be > 0 wavelengths");
    if (!(std::abs(norm(axis) - 1.0) <= 1e-12))
        throw ValidationError("array axis must be a unit vector");
}

Vec3 Direction::unit() const
{
    const double ce = std::cos(el_rad);
    return {ce * std::cos(az_rad), ce * std::sin(az_rad), std::sin(el_rad)};
}

Direction Direction::from_vector(const Vec3 &v)
{
    Direction d;
    d.az_rad = std::atan2(v.y, v.x);
    if (d.az_rad == -kPi)
        d.az_rad = kPi;
    d.el_rad = std::atan2(v.z, std::hypot(v.x, v.y));
    return d;
}

Direction Direction::from_degrees(double az_deg, double el_deg)
{
    return {deg_to_rad(az_deg), deg_to_rad(el_deg)};
}

double rad_to_deg(double rad) { return rad * (180.0 / kPi); }
double deg_to_rad(double deg) { return deg * (kPi / 180.0); }

double wrap_azimuth_deg(double deg)
{
    deg = std::fmod(deg, 360.0);
    if (deg > 180.0)
        deg -= 360.0;
    else if (deg <= -180.0)
        deg += 360.0;
    return deg;
}

ArrayConfig parse_array_descriptor(std::string_view s)
{
    const std::string full(s);
    auto fail = [&](const std::string &why) -> ValidationError {
        return ValidationError("array descriptor '" + full + "': " + why);
    };
    // ula:<n>:<spacing>:<axis>; the axis itself may contain commas but no colons
    const auto parts = text::split(s, ':');
    if (parts.size() != 4 || parts[0] != "ula")
        throw fail("expected ula:<n>:<spacing_wl>:<axis>");

    ArrayConfig cfg;
    long long n = 0;
    if (!text::parse_long(parts[1], n) || n < 1)
        throw fail("element count must be an integer >= 1");
    cfg.n_elements = static_cast<std::size_t>(n);
    if (!text::parse_double(parts[2], cfg.spacing_wl) || !(cfg.spacing_wl > 0.0))
        throw fail("spacing must be a positive number");

    std::string_view ax = parts[3];
    if (ax == "x")
        cfg.axis = {1.0, 0.0, 0.0};
    else if (ax == "y")
        cfg.axis = {0.0, 1.0, 0.0};
    else if (ax == "z")
        cfg.axis = {0.0, 0.0, 1.0};
    else
    {
        if (ax.size() >= 2 && ax.front() == '<' && ax.back() == '>')
            ax = ax.substr(1, ax.size() - 2);
        const auto c = text::split(ax, ',');
        Vec3 v;
        if (c.size() != 3 || !text::parse_double(c[0], v.x) || !text::parse_double(c[1], v.y) ||
            !text::parse_double(c[2], v.z))
            throw fail("axis must be x, y, z or ux,uy,uz");
        const double len = norm(v);
        if (!(len > 0.0) || !std::isfinite(len))
            throw fail("axis must be non-zero");
        cfg.axis = normalized(v);
    }
    cfg.validate();
    return cfg;
}

std::string format_array_descriptor(const ArrayConfig &cfg)
{
    std::string axis;
    if (cfg.axis == Vec3{1.0, 0.0, 0.0})
        axis = "x";
    else if (cfg.axis == Vec3{0.0, 1.0, 0.0})
        axis = "y";
    else if (cfg.axis == Vec3{0.0, 0.0, 1.0})
        axis = "z";
    else
        axis = text::format_double(cfg.axis.x) + "," + text::format_double(cfg.axis.y) + "," +
               text::format_double(cfg.axis.z);
    return "ula:" + std::to_string(cfg.n_elements) + ":" + text::format_double(cfg.spacing_wl) + ":" + axis;
}

std::vector<Vec3> element_positions(const ArrayConfig &cfg, double wavelength_m)
{
    std::vector<Vec3> pts(cfg.n_elements);
    const double step = cfg.spacing_wl * wavelength_m;
    for (std::size_t k = 0; k < cfg.n_elements; ++k)
        pts[k] = cfg.reference + (static_cast<double>(k) * step) * cfg.axis;
    return pts;
}

double aperture_m(const ArrayConfig &cfg, double wavelength_m)
{
    return static_cast<double>(cfg.n_elements - 1) * cfg.spacing_wl * wavelength_m;
}

// The wavelength cancels: (2 pi / lambda) <p_k - ref, u> = 2 pi k spacing_wl <axis, u>.
std::vector<Complex> steering_vector(const ArrayConfig &cfg, const Direction &dir, double /*wavelength_m*/)
{
    const double proj = dot(cfg.axis, dir.unit());
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_elements));
    std::vector<Complex> a(cfg.n_elements);
    for (std::size_t k = 0; k < cfg.n_elements; ++k)
    {
        const double phase = 2.0 * kPi * static_cast<double>(k) * cfg.spacing_wl * proj;
        a[k] = std::polar(scale, -phase);
    }
    return a;
}

} // namespace chanforge
