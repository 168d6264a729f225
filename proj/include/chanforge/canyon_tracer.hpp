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
#include "chanforge/geometry.hpp"
#include "chanforge/ray_model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chanforge
{

// Urban canyon: two walls parallel to the x axis at y = wall_y0 and y = wall_y1, optional ground at
// z = 0. Walls are unbounded in x and span z in [0, wall_height_m]; the ground is unbounded.
enum class PlaneId : int
{
    wall_y0 = 0,
    wall_y1 = 1,
    ground = 2,
};

std::string_view plane_name(PlaneId id);

struct Plane
{
    PlaneId id = PlaneId::wall_y0;
    Vec3 normal{0.0, 1.0, 0.0}; // unit
    double offset = 0.0;        // plane is { x : <normal, x> = offset }

    double signed_distance(const Vec3 &p) const { return dot(normal, p) - offset; }
    Vec3 mirror(const Vec3 &p) const { return p - 2.0 * signed_distance(p) * normal; }
    Vec3 mirror_direction(const Vec3 &d) const { return d - 2.0 * dot(normal, d) * normal; }
};

struct Receiver
{
    std::string id;
    Vec3 position;
};

struct Scene
{
    double wall_y0 = 0.0;
    double wall_y1 = 20.0;
    double wall_height_m = 40.0;
    bool ground = true;
    std::string tx_id = "TX1";
    Vec3 tx{0.0, 10.0, 10.0};
    std::vector<Receiver> rx_list;
    double frequency_hz = 60e9;
    Complex refl_coeff{-0.8, 0.0};
    int max_order = 2;

    void validate() const;
    std::vector<Plane> planes() const;
    Plane plane(PlaneId id) const;
    double wavelength() const { return wavelength_m(frequency_hz); }
    const Receiver &receiver(std::string_view rx_id) const;
    bool inside(const Vec3 &p) const;

    // Walls at y = 0 and y = 20 m, 40 m high, ground, TX at (0, 10, 10), 60 GHz, Gamma = -0.8,
    // max_order 2, ten receivers along the street between 5 m and 200 m.
    static Scene default_scene();
};

using PlaneSequence = std::vector<PlaneId>;

struct TracedPath
{
    std::vector<Plane> planes; // reflecting planes in bounce order
    std::vector<Vec3> points;  // TX, interaction points, RX
    double length_m = 0.0;
    Direction aod;
    Direction aoa;
    Complex gain{0.0, 0.0};
    Complex reflection{1.0, 0.0}; // product of the reflection coefficients along the path

    std::size_t order() const { return planes.size(); }
    PlaneSequence plane_sequence() const;
};

// All plane sequences of the given length without immediate repetition, in lexicographic order of
// plane id. Order 0 yields the single empty (line-of-sight) sequence.
std::vector<PlaneSequence> enumerate_image_sequences(const Scene &scene, int order);

// Image-source construction. Returns nullopt when an interaction point leaves the wall extents or the
// reflections cannot occur in the requested order.
std::optional<TracedPath> specular_path(const Scene &scene, const Vec3 &rx, const PlaneSequence &seq);

struct TraceOptions
{
    bool drop_los = false;
};

// All valid paths of order 0..max_order, sorted by |gain| descending then length ascending.
std::vector<TracedPath> trace_paths(const Scene &scene, const Vec3 &rx, const TraceOptions &opts = {});

Ray ray_from_path(const TracedPath &path);

PairRecord trace_pair(const Scene &scene, std::string_view rx_id, const TraceOptions &opts = {});

// trace_pair for every receiver in rx_list order; receivers are distributed over jobs threads.
std::vector<PairRecord> trace_scene(const Scene &scene, const TraceOptions &opts = {}, int jobs = 1);

} // namespace chanforge
