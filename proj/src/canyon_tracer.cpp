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

#include "chanforge/canyon_tracer.hpp"

#include "chanforge/errors.hpp"
#include "chanforge/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace chanforge
{

std::string_view plane_name(PlaneId id)
{
    switch (id)
    {
    case PlaneId::wall_y0:
        return "wall_y0";
    case PlaneId::wall_y1:
        return "wall_y1";
    case PlaneId::ground:
        return "ground";
    }
    return "?";
}

bool Scene::inside(const Vec3 &p) const
{
    return p.y > wall_y0 && p.y < wall_y1 && p.z > 0.0 && p.z < wall_height_m && std::isfinite(p.x);
}

void Scene::validate() const
{
    auto fail = [](const std::string &why) { throw ValidationError("scene: " + why); };
    if (!std::isfinite(wall_y0) || !std::isfinite(wall_y1) || !(wall_y0 < wall_y1))
        fail("wall_y0 must be below wall_y1");
    if (!(wall_height_m > 0.0) || !std::isfinite(wall_height_m))
        fail("wall_height_m must be > 0");
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
        fail("frequency_hz must be > 0");
    if (!(std::abs(refl_coeff) <= 1.0))
        fail("|refl_coeff| must be <= 1");
    if (max_order < 0 || max_order > 16)
        fail("max_order must be in [0, 16]");
    if (tx_id.empty())
        fail("tx id is empty");
    if (!inside(tx))
        fail("tx must lie strictly inside the canyon");
    std::set<std::string> ids;
    for (const auto &r : rx_list)
    {
        if (r.id.empty() || r.id.find_first_of(",:;\n\r\"") != std::string::npos)
            fail("invalid receiver id '" + r.id + "'");
        if (!ids.insert(r.id).second)
            fail("duplicate receiver id '" + r.id + "'");
        if (!inside(r.position))
            fail("receiver '" + r.id + "' must lie strictly inside the canyon");
    }
}

Plane Scene::plane(PlaneId id) const
{
    switch (id)
    {
    case PlaneId::wall_y0:
        return {id, {0.0, 1.0, 0.0}, wall_y0};
    case PlaneId::wall_y1:
        return {id, {0.0, 1.0, 0.0}, wall_y1};
    case PlaneId::ground:
        return {id, {0.0, 0.0, 1.0}, 0.0};
    }
    throw ValidationError("unknown plane id");
}

std::vector<Plane> Scene::planes() const
{
    std::vector<Plane> out{plane(PlaneId::wall_y0), plane(PlaneId::wall_y1)};
    if (ground)
        out.push_back(plane(PlaneId::ground));
    return out;
}

const Receiver &Scene::receiver(std::string_view rx_id) const
{
    for (const auto &r : rx_list)
        if (r.id == rx_id)
            return r;
    throw ValidationError("scene has no receiver '" + std::string(rx_id) + "'");
}

Scene Scene::default_scene()
{
    Scene s;
    const double xs[] = {5.0, 12.0, 20.0, 30.0, 45.0, 60.0, 80.0, 110.0, 150.0, 200.0};
    for (int i = 0; i < 10; ++i)
        s.rx_list.push_back({"RX" + std::to_string(i + 1), {xs[i], i % 2 == 0 ? 6.0 : 14.0, 1.5}});
    return s;
}

PlaneSequence TracedPath::plane_sequence() const
{
    PlaneSequence seq;
    for (const auto &p : planes)
        seq.push_back(p.id);
    return seq;
}

std::vector<PlaneSequence> enumerate_image_sequences(const Scene &scene, int order)
{
    std::vector<PlaneSequence> out;
    if (order < 0)
        return out;
    std::vector<PlaneId> ids;
    for (const auto &p : scene.planes())
        ids.push_back(p.id);

    PlaneSequence cur;
    auto extend = [&](auto &self) -> void {
        if (static_cast<int>(cur.size()) == order)
        {
            out.push_back(cur);
            return;
        }
        for (auto id : ids)
        {
            if (!cur.empty() && cur.back() == id)
                continue;
            cur.push_back(id);
            self(self);
            cur.pop_back();
        }
    };
    extend(extend);
    return out;
}

std::optional<TracedPath> specular_path(const Scene &scene, const Vec3 &rx, const PlaneSequence &seq)
{
    const std::size_t n = seq.size();
    TracedPath path;
    path.planes.reserve(n);
    for (auto id : seq)
        path.planes.push_back(scene.plane(id));

    // images[k] is the source mirrored through the first k planes
    std::vector<Vec3> images(n + 1);
    images[0] = scene.tx;
    for (std::size_t k = 0; k < n; ++k)
        images[k + 1] = path.planes[k].mirror(images[k]);

    path.points.assign(n + 2, Vec3{});
    path.points[0] = scene.tx;
    path.points[n + 1] = rx;

    constexpr double kEdge = 1e-12;
    Vec3 target = rx;
    for (std::size_t k = n; k >= 1; --k)
    {
        const Plane &pl = path.planes[k - 1];
        const Vec3 &img = images[k];
        const Vec3 dir = target - img;
        const double denom = dot(pl.normal, dir);
        if (denom == 0.0)
            return std::nullopt;
        const double t = -pl.signed_distance(img) / denom;
        if (!(t > kEdge && t < 1.0 - kEdge))
            return std::nullopt;
        Vec3 p = img + t * dir;
        if (pl.id == PlaneId::ground)
        {
            p.z = 0.0;
            if (p.y < scene.wall_y0 || p.y > scene.wall_y1)
                return std::nullopt;
        }
        else
        {
            p.y = pl.offset;
            if (p.z < 0.0 || p.z > scene.wall_height_m)
                return std::nullopt;
        }
        path.points[k] = p;
        target = p;
    }

    const double lambda = scene.wavelength();
    path.length_m = distance(images[n], rx);
    path.aod = Direction::from_vector(path.points[1] - path.points[0]);
    path.aoa = Direction::from_vector(path.points[n + 1] - path.points[n]);

    for (std::size_t k = 0; k < n; ++k)
        path.reflection *= scene.refl_coeff;
    path.gain = path.reflection * std::polar(lambda / (4.0 * kPi * path.length_m), -2.0 * kPi * path.length_m / lambda);
    return path;
}

std::vector<TracedPath> trace_paths(const Scene &scene, const Vec3 &rx, const TraceOptions &opts)
{
    std::vector<TracedPath> paths;
    for (int order = opts.drop_los ? 1 : 0; order <= scene.max_order; ++order)
        for (const auto &seq : enumerate_image_sequences(scene, order))
            if (auto p = specular_path(scene, rx, seq))
                paths.push_back(std::move(*p));
    std::stable_sort(paths.begin(), paths.end(), [](const TracedPath &a, const TracedPath &b) {
        const double ga = std::abs(a.gain);
        const double gb = std::abs(b.gain);
        if (ga != gb)
            return ga > gb;
        return a.length_m < b.length_m;
    });
    return paths;
}

Ray ray_from_path(const TracedPath &path)
{
    auto el_deg = [](double rad) { return std::clamp(rad_to_deg(rad), -90.0, 90.0); };
    Ray r;
    r.gain = path.gain;
    r.delay_ns = path.length_m / kSpeedOfLight * 1e9;
    r.aod_az_deg = wrap_azimuth_deg(rad_to_deg(path.aod.az_rad));
    r.aod_el_deg = el_deg(path.aod.el_rad);
    r.aoa_az_deg = wrap_azimuth_deg(rad_to_deg(path.aoa.az_rad));
    r.aoa_el_deg = el_deg(path.aoa.el_rad);
    r.n_bounces = static_cast<int>(path.order());
    r.path_length_m = path.length_m;
    r.interactions.assign(path.points.begin() + 1, path.points.end() - 1);
    return r;
}

PairRecord trace_pair(const Scene &scene, std::string_view rx_id, const TraceOptions &opts)
{
    const Receiver &rx = scene.receiver(rx_id);
    std::vector<Ray> rays;
    for (const auto &p : trace_paths(scene, rx.position, opts))
        rays.push_back(ray_from_path(p));
    return make_pair_record(scene.tx_id, rx.id, std::move(rays), 1.0, scene.frequency_hz);
}

std::vector<PairRecord> trace_scene(const Scene &scene, const TraceOptions &opts, int jobs)
{
    scene.validate();
    std::vector<PairRecord> out(scene.rx_list.size());
    parallel_for(out.size(), jobs, [&](std::size_t i) { out[i] = trace_pair(scene, scene.rx_list[i].id, opts); });
    return out;
}

} // namespace chanforge
