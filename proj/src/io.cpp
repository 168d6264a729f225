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

#include "chanforge/io.hpp"

#include "chanforge/errors.hpp"
#include "text.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chanforge
{

using nlohmann::json;

std::string format_double(double v) { return text::format_double(v); }

std::string read_text_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw IoError("cannot read '" + path.string() + "'");
    return ss.str();
}

void write_text_file(const std::filesystem::path &path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
}

std::string content_hash(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ------------------------------------------------------------------------
// Scene

namespace
{

json parse_json(std::string_view text, const char *what)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}

double number_of(const json &j, const std::string &name)
{
    if (!j.is_number())
        throw ValidationError("scene: '" + name + "' must be a number");
    return j.get<double>();
}

Vec3 point_of(const json &j, const std::string &name)
{
    if (!j.is_array() || j.size() != 3)
        throw ValidationError("scene: '" + name + "' must be [x, y, z]");
    return {number_of(j[0], name), number_of(j[1], name), number_of(j[2], name)};
}

} // namespace

Scene parse_scene_json(std::string_view text)
{
    const json j = parse_json(text, "scene");
    if (!j.is_object())
        throw ValidationError("scene: top level must be an object");

    Scene s = Scene::default_scene();
    for (const auto &[key, v] : j.items())
    {
        if (key == "wall_y0")
            s.wall_y0 = number_of(v, key);
        else if (key == "wall_y1")
            s.wall_y1 = number_of(v, key);
        else if (key == "wall_height_m")
            s.wall_height_m = number_of(v, key);
        else if (key == "ground")
        {
            if (!v.is_boolean())
                throw ValidationError("scene: 'ground' must be a boolean");
            s.ground = v.get<bool>();
        }
        else if (key == "tx_id")
        {
            if (!v.is_string())
                throw ValidationError("scene: 'tx_id' must be a string");
            s.tx_id = v.get<std::string>();
        }
        else if (key == "tx")
            s.tx = point_of(v, key);
        else if (key == "rx")
        {
            if (!v.is_array())
                throw ValidationError("scene: 'rx' must be an array");
            s.rx_list.clear();
            for (const auto &r : v)
            {
                if (!r.is_object() || !r.contains("id") || !r.contains("pos") || r.size() != 2 || !r["id"].is_string())
                    throw ValidationError("scene: receivers must be {\"id\": string, \"pos\": [x, y, z]}");
                s.rx_list.push_back({r["id"].get<std::string>(), point_of(r["pos"], "rx.pos")});
            }
        }
        else if (key == "frequency_hz")
            s.frequency_hz = number_of(v, key);
        else if (key == "refl_coeff")
        {
            if (!v.is_array() || v.size() != 2)
                throw ValidationError("scene: 'refl_coeff' must be [re, im]");
            s.refl_coeff = {number_of(v[0], key), number_of(v[1], key)};
        }
        else if (key == "max_order")
        {
            if (!v.is_number_integer())
                throw ValidationError("scene: 'max_order' must be an integer");
            s.max_order = v.get<int>();
        }
        else
            throw ValidationError("scene: unknown key '" + key + "'");
    }
    s.validate();
    return s;
}

Scene load_scene(const std::filesystem::path &path) { return parse_scene_json(read_text_file(path)); }

std::string scene_to_json(const Scene &s)
{
    nlohmann::ordered_json j;
    j["wall_y0"] = s.wall_y0;
    j["wall_y1"] = s.wall_y1;
    j["wall_height_m"] = s.wall_height_m;
    j["ground"] = s.ground;
    j["tx_id"] = s.tx_id;
    j["tx"] = {s.tx.x, s.tx.y, s.tx.z};
    j["rx"] = nlohmann::ordered_json::array();
    for (const auto &r : s.rx_list)
        j["rx"].push_back({{"id", r.id}, {"pos", {r.position.x, r.position.y, r.position.z}}});
    j["frequency_hz"] = s.frequency_hz;
    j["refl_coeff"] = {s.refl_coeff.real(), s.refl_coeff.imag()};
    j["max_order"] = s.max_order;
    return j.dump(2) + "\n";
}

// ------------------------------------------------------------------------
// Channel sets

namespace
{

std::string json_string(const std::string &s) { return json(s).dump(); }

void append_rows(std::string &out, const CMatrix &m, bool imag)
{
    out += '[';
    for (std::size_t r = 0; r < m.rows(); ++r)
    {
        out += r == 0 ? "[" : ", [";
        for (std::size_t c = 0; c < m.cols(); ++c)
        {
            if (c > 0)
                out += ", ";
            out += format_double(imag ? m(r, c).imag() : m(r, c).real());
        }
        out += ']';
    }
    out += ']';
}

} // namespace

std::string format_channel_set(const std::vector<ChannelMatrix> &channels)
{
    if (channels.empty())
        return "[]\n";
    std::string out = "[\n";
    for (std::size_t i = 0; i < channels.size(); ++i)
    {
        const auto &h = channels[i];
        out += "  {\n";
        out += "    \"pair\": [" + json_string(h.tx_id) + ", " + json_string(h.rx_id) + "],\n";
        out += "    \"method\": \"" + std::string(method_name(h.method)) + "\",\n";
        out += "    \"n_rx\": " + std::to_string(h.n_rx()) + ",\n";
        out += "    \"n_tx\": " + std::to_string(h.n_tx()) + ",\n";
        out += "    \"frequency_hz\": " + format_double(h.frequency_hz) + ",\n";
        out += "    \"array_tx\": " + json_string(format_array_descriptor(h.tx_cfg)) + ",\n";
        out += "    \"array_rx\": " + json_string(format_array_descriptor(h.rx_cfg)) + ",\n";
        out += "    \"entries_re\": ";
        append_rows(out, h.entries, false);
        out += ",\n    \"entries_im\": ";
        append_rows(out, h.entries, true);
        out += i + 1 < channels.size() ? "\n  },\n" : "\n  }\n";
    }
    out += "]\n";
    return out;
}

std::vector<ChannelMatrix> parse_channel_set(std::string_view text)
{
    const json j = parse_json(text, "channel set");
    if (!j.is_array())
        throw ValidationError("channel set: top level must be an array");

    std::vector<ChannelMatrix> out;
    for (std::size_t i = 0; i < j.size(); ++i)
    {
        const json &o = j[i];
        const std::string where = "channel set entry " + std::to_string(i);
        if (!o.is_object())
            throw ValidationError(where + ": must be an object");
        for (const auto &[key, v] : o.items())
        {
            (void)v;
            if (key != "pair" && key != "method" && key != "n_rx" && key != "n_tx" && key != "frequency_hz" &&
                key != "array_tx" && key != "array_rx" && key != "entries_re" && key != "entries_im")
                throw ValidationError(where + ": unknown key '" + key + "'");
        }
        for (const char *req : {"pair", "method", "n_rx", "n_tx", "frequency_hz", "entries_re", "entries_im"})
            if (!o.contains(req))
                throw ValidationError(where + ": missing '" + std::string(req) + "'");

        ChannelMatrix h;
        const json &pair = o["pair"];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
            throw ValidationError(where + ": 'pair' must be [tx, rx]");
        h.tx_id = pair[0].get<std::string>();
        h.rx_id = pair[1].get<std::string>();
        if (!o["method"].is_string())
            throw ValidationError(where + ": 'method' must be a string");
        h.method = parse_method(o["method"].get<std::string>());
        if (!o["n_rx"].is_number_unsigned() || !o["n_tx"].is_number_unsigned() || !o["frequency_hz"].is_number())
            throw ValidationError(where + ": n_rx, n_tx must be non-negative integers and frequency_hz a number");
        const auto n_rx = o["n_rx"].get<std::size_t>();
        const auto n_tx = o["n_tx"].get<std::size_t>();
        h.frequency_hz = o["frequency_hz"].get<double>();

        h.tx_cfg.n_elements = n_tx;
        h.rx_cfg.n_elements = n_rx;
        if (o.contains("array_tx"))
            h.tx_cfg = parse_array_descriptor(o["array_tx"].get<std::string>());
        if (o.contains("array_rx"))
            h.rx_cfg = parse_array_descriptor(o["array_rx"].get<std::string>());
        if (h.tx_cfg.n_elements != n_tx || h.rx_cfg.n_elements != n_rx)
            throw ValidationError(where + ": array descriptors disagree with n_tx / n_rx");

        h.entries = CMatrix(n_rx, n_tx);
        auto fill = [&](const json &rows, bool imag, const char *name) {
            if (!rows.is_array() || rows.size() != n_rx)
                throw ValidationError(where + ": '" + name + "' must have n_rx rows");
            for (std::size_t r = 0; r < n_rx; ++r)
            {
                if (!rows[r].is_array() || rows[r].size() != n_tx)
                    throw ValidationError(where + ": '" + name + "' rows must have n_tx values");
                for (std::size_t c = 0; c < n_tx; ++c)
                {
                    if (!rows[r][c].is_number())
                        throw ValidationError(where + ": '" + name + "' values must be numbers");
                    const double v = rows[r][c].get<double>();
                    if (imag)
                        h.entries(r, c).imag(v);
                    else
                        h.entries(r, c).real(v);
                }
            }
        };
        fill(o["entries_re"], false, "entries_re");
        fill(o["entries_im"], true, "entries_im");
        out.push_back(std::move(h));
    }
    return out;
}

// ------------------------------------------------------------------------
// CSV outputs

namespace
{
std::string maybe(double v) { return std::isnan(v) ? std::string() : format_double(v); }
} // namespace

std::string format_errors_csv(const std::vector<ErrorReport> &reports)
{
    std::string out = "pair,distance_m,los,raw_error_pct,aligned_error_pct\n";
    for (const auto &r : reports)
        out += r.pair + ',' + maybe(r.tx_rx_distance_m) + ',' + (r.los ? "true" : "false") + ',' +
               format_double(r.raw_error_pct) + ',' + format_double(r.aligned_error_pct) + '\n';
    return out;
}

std::string format_capacity_csv(const std::vector<CapacityCurve> &curves)
{
    std::string out = "pair,method,snr_db,capacity_bps_hz\n";
    for (const auto &c : curves)
        for (std::size_t i = 0; i < c.snr_db.size(); ++i)
            out += c.pair + ',' + std::string(method_name(c.method)) + ',' + format_double(c.snr_db[i]) + ',' +
                   format_double(c.capacity_bps_hz[i]) + '\n';
    return out;
}

std::string format_sweep_csv(const std::vector<SweepPoint> &points)
{
    std::string out = "pair,distance_m,los,raw_error_pct,aligned_error_pct,fresnel_bound_pct\n";
    for (const auto &p : points)
        out += p.error.pair + ',' + format_double(p.distance_m) + ',' + (p.error.los ? "true" : "false") + ',' +
               format_double(p.error.raw_error_pct) + ',' + format_double(p.error.aligned_error_pct) + ',' +
               maybe(100.0 * p.fresnel_bound) + '\n';
    return out;
}

} // namespace chanforge
