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

#include "chanforge/ray_model.hpp"

#include "chanforge/errors.hpp"
#include "text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace chanforge
{

namespace
{

bool close_relative(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

void require(bool cond, const std::string &what)
{
    if (!cond)
        throw ValidationError(what);
}

void validate_id(const std::string &id, const char *field)
{
    require(!id.empty(), std::string(field) + " is empty");
    require(id.find_first_of(",:;\n\r\"") == std::string::npos,
            std::string(field) + " '" + id + "' contains a reserved character");
}

} // namespace

void validate_ray(const Ray &ray)
{
    require(std::isfinite(ray.gain.real()) && std::isfinite(ray.gain.imag()), "gain is not finite");
    require(std::isfinite(ray.delay_ns) && ray.delay_ns >= 0.0, "delay_ns must be finite and >= 0");
    auto check_az = [](double v, const char *name) {
        require(v > -180.0 && v <= 180.0, std::string(name) + " outside (-180, 180]");
    };
    auto check_el = [](double v, const char *name) {
        require(v >= -90.0 && v <= 90.0, std::string(name) + " outside [-90, 90]");
    };
    check_az(ray.aod_az_deg, "aod_az_deg");
    check_el(ray.aod_el_deg, "aod_el_deg");
    check_az(ray.aoa_az_deg, "aoa_az_deg");
    check_el(ray.aoa_el_deg, "aoa_el_deg");
    require(ray.n_bounces >= 0, "n_bounces must be >= 0");
    if (ray.path_length_m)
    {
        const double len = *ray.path_length_m;
        require(std::isfinite(len) && len > 0.0, "path_length_m must be > 0");
        require(std::abs(len - ray.delay_s() * kSpeedOfLight) / len < 1e-6,
                "path_length_m inconsistent with delay_ns");
    }
    require(ray.interactions.empty() || ray.interactions.size() == static_cast<std::size_t>(ray.n_bounces),
            "interactions count differs from n_bounces");
}

double total_ray_power(const std::vector<Ray> &rays)
{
    double sum = 0.0;
    for (const auto &r : rays)
        sum += r.power();
    return sum;
}

double power_weighted_mean_toa_s(const std::vector<Ray> &rays)
{
    double num = 0.0;
    double den = 0.0;
    for (const auto &r : rays)
    {
        num += r.power() * r.delay_s();
        den += r.power();
    }
    return den > 0.0 ? num / den : 0.0;
}

void refresh_summaries(PairRecord &record)
{
    record.mean_toa_s = power_weighted_mean_toa_s(record.rays);
    record.p_rx_w = record.p_tx_w * total_ray_power(record.rays);
}

PairRecord make_pair_record(std::string tx_id, std::string rx_id, std::vector<Ray> rays, double p_tx_w,
                            double frequency_hz)
{
    PairRecord rec;
    rec.tx_id = std::move(tx_id);
    rec.rx_id = std::move(rx_id);
    rec.rays = std::move(rays);
    rec.p_tx_w = p_tx_w;
    rec.frequency_hz = frequency_hz;
    refresh_summaries(rec);
    return rec;
}

PairRecord select_top_l(const PairRecord &record, std::size_t l)
{
    const auto &rays = record.rays;
    std::vector<std::size_t> order(rays.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ga = std::abs(rays[a].gain);
        const double gb = std::abs(rays[b].gain);
        if (ga != gb)
            return ga > gb;
        if (rays[a].delay_ns != rays[b].delay_ns)
            return rays[a].delay_ns < rays[b].delay_ns;
        return a < b;
    });
    order.resize(std::min(l, order.size()));
    std::sort(order.begin(), order.end());

    PairRecord out = record;
    out.rays.clear();
    out.rays.reserve(order.size());
    for (auto i : order)
        out.rays.push_back(rays[i]);
    refresh_summaries(out);
    return out;
}

// ------------------------------------------------------------------------
// File I/O

std::filesystem::path summary_path_for(const std::filesystem::path &csv_path)
{
    auto p = csv_path;
    p.replace_extension(".summary.json");
    return p;
}

std::string format_rays_csv(const std::vector<PairRecord> &records)
{
    using text::format_double;
    std::string out(kRayCsvHeader);
    out += '\n';
    for (const auto &rec : records)
    {
        for (std::size_t i = 0; i < rec.rays.size(); ++i)
        {
            const Ray &r = rec.rays[i];
            out += rec.tx_id + ',' + rec.rx_id + ',' + std::to_string(i) + ',';
            out += format_double(r.gain.real()) + ',' + format_double(r.gain.imag()) + ',';
            out += format_double(r.delay_ns) + ',';
            out += format_double(r.aod_az_deg) + ',' + format_double(r.aod_el_deg) + ',';
            out += format_double(r.aoa_az_deg) + ',' + format_double(r.aoa_el_deg) + ',';
            out += std::to_string(r.n_bounces) + ',';
            if (r.path_length_m)
                out += format_double(*r.path_length_m);
            out += ',';
            for (std::size_t k = 0; k < r.interactions.size(); ++k)
            {
                const Vec3 &p = r.interactions[k];
                if (k > 0)
                    out += ';';
                out += format_double(p.x) + ' ' + format_double(p.y) + ' ' + format_double(p.z);
            }
            out += '\n';
        }
    }
    return out;
}

std::string format_summary_json(const std::vector<PairRecord> &records)
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto &rec : records)
    {
        j[rec.key()] = {{"mean_toa_s", rec.mean_toa_s},
                        {"p_tx_w", rec.p_tx_w},
                        {"p_rx_w", rec.p_rx_w},
                        {"frequency_hz", rec.frequency_hz}};
    }
    return j.dump(2) + "\n";
}

namespace
{

struct SummaryEntry
{
    double mean_toa_s = 0.0;
    double p_tx_w = 1.0;
    double p_rx_w = 0.0;
    double frequency_hz = 0.0;
};

std::map<std::string, SummaryEntry> parse_summaries(std::string_view json_text, std::string_view source)
{
    std::map<std::string, SummaryEntry> out;
    if (json_text.empty())
        return out;
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(json_text);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw ValidationError(std::string(source) + " summary: " + e.what());
    }
    if (!j.is_object())
        throw ValidationError(std::string(source) + " summary: top level must be an object");
    for (const auto &[key, val] : j.items())
    {
        const auto where = std::string(source) + " summary '" + key + "'";
        if (!val.is_object())
            throw ValidationError(where + ": entry must be an object");
        if (key.find(':') == std::string::npos)
            throw ValidationError(where + ": key must be \"tx_id:rx_id\"");
        SummaryEntry e;
        for (const auto &[field, v] : val.items())
        {
            if (!v.is_number())
                throw ValidationError(where + ": field '" + field + "' must be a number");
            const double x = v.get<double>();
            if (field == "mean_toa_s")
                e.mean_toa_s = x;
            else if (field == "p_tx_w")
                e.p_tx_w = x;
            else if (field == "p_rx_w")
                e.p_rx_w = x;
            else if (field == "frequency_hz")
                e.frequency_hz = x;
            else
                throw ValidationError(where + ": unknown field '" + field + "'");
        }
        out.emplace(key, e);
    }
    return out;
}

std::vector<Vec3> parse_interactions(std::string_view field)
{
    std::vector<Vec3> pts;
    if (field.empty())
        return pts;
    for (auto triple : text::split(field, ';'))
    {
        const auto parts = text::split(triple, ' ');
        double c[3];
        if (parts.size() != 3 || !text::parse_double(parts[0], c[0]) || !text::parse_double(parts[1], c[1]) ||
            !text::parse_double(parts[2], c[2]))
            throw ValidationError("interactions: expected 'x y z' triples separated by ';'");
        pts.push_back({c[0], c[1], c[2]});
    }
    return pts;
}

} // namespace

std::vector<PairRecord> parse_rays_text(std::string_view csv_text, std::string_view summary_json,
                                        std::string_view source_name)
{
    const std::string source(source_name);
    const auto rows = text::lines(csv_text);
    if (rows.empty() || rows.front() != kRayCsvHeader)
        throw ValidationError(source + " line 1: header must be exactly '" + std::string(kRayCsvHeader) + "'");

    std::vector<PairRecord> records;
    std::map<std::string, std::size_t> index_of;
    std::map<std::string, std::set<long long>> seen_idx;

    for (std::size_t ln = 1; ln < rows.size(); ++ln)
    {
        const auto row = rows[ln];
        const std::string where = source + " line " + std::to_string(ln + 1);
        if (row.empty())
        {
            if (ln + 1 == rows.size())
                break;
            throw ValidationError(where + ": empty line");
        }
        const auto f = text::split(row, ',');
        if (f.size() != 13)
            throw ValidationError(where + ": expected 13 fields, found " + std::to_string(f.size()));

        std::string tx(f[0]), rx(f[1]);
        Ray ray;
        long long ray_idx = 0;
        long long bounces = 0;
        double re = 0.0, im = 0.0;
        auto num = [&](std::string_view s, double &out, const char *name) {
            if (!text::parse_double(s, out) || !std::isfinite(out))
                throw ValidationError(where + ": malformed " + std::string(name) + " '" + std::string(s) + "'");
        };
        if (!text::parse_long(f[2], ray_idx) || ray_idx < 0)
            throw ValidationError(where + ": malformed ray_idx '" + std::string(f[2]) + "'");
        num(f[3], re, "gain_re");
        num(f[4], im, "gain_im");
        ray.gain = {re, im};
        num(f[5], ray.delay_ns, "delay_ns");
        num(f[6], ray.aod_az_deg, "aod_az_deg");
        num(f[7], ray.aod_el_deg, "aod_el_deg");
        num(f[8], ray.aoa_az_deg, "aoa_az_deg");
        num(f[9], ray.aoa_el_deg, "aoa_el_deg");
        if (!text::parse_long(f[10], bounces) || bounces < 0 || bounces > 1000000)
            throw ValidationError(where + ": malformed n_bounces '" + std::string(f[10]) + "'");
        ray.n_bounces = static_cast<int>(bounces);
        if (!f[11].empty())
        {
            double len = 0.0;
            num(f[11], len, "path_length_m");
            ray.path_length_m = len;
        }
        try
        {
            validate_id(tx, "tx_id");
            validate_id(rx, "rx_id");
            ray.interactions = parse_interactions(f[12]);
            validate_ray(ray);
        }
        catch (const ValidationError &e)
        {
            throw ValidationError(where + " (pair " + tx + ":" + rx + "): " + e.what());
        }

        const std::string key = tx + ":" + rx;
        if (!seen_idx[key].insert(ray_idx).second)
            throw ValidationError(where + ": duplicate ray (" + tx + ", " + rx + ", " + std::to_string(ray_idx) + ")");
        auto [it, inserted] = index_of.emplace(key, records.size());
        if (inserted)
        {
            PairRecord rec;
            rec.tx_id = tx;
            rec.rx_id = rx;
            records.push_back(std::move(rec));
        }
        records[it->second].rays.push_back(std::move(ray));
    }

    const auto summaries = parse_summaries(summary_json, source);
    for (const auto &[key, s] : summaries)
    {
        if (index_of.count(key) == 0)
        {
            const auto colon = key.find(':');
            PairRecord rec;
            rec.tx_id = key.substr(0, colon);
            rec.rx_id = key.substr(colon + 1);
            index_of.emplace(key, records.size());
            records.push_back(std::move(rec));
        }
    }

    for (auto &rec : records)
    {
        const auto it = summaries.find(rec.key());
        if (it != summaries.end())
        {
            rec.p_tx_w = it->second.p_tx_w;
            rec.frequency_hz = it->second.frequency_hz;
        }
        if (!(rec.p_tx_w >= 0.0) || !(rec.frequency_hz >= 0.0))
            throw ValidationError(source + " pair " + rec.key() + ": p_tx_w and frequency_hz must be >= 0");
        refresh_summaries(rec);
        if (it != summaries.end())
        {
            if (!close_relative(rec.mean_toa_s, it->second.mean_toa_s, 1e-9))
                throw ValidationError(source + " pair " + rec.key() + ": mean_toa_s disagrees with the rays");
            if (!close_relative(rec.p_rx_w, it->second.p_rx_w, 1e-9))
                throw ValidationError(source + " pair " + rec.key() + ": p_rx_w disagrees with p_tx_w * sum |gain|^2");
        }
    }
    return records;
}

std::vector<PairRecord> parse_rays(const std::filesystem::path &csv_path)
{
    auto slurp = [](const std::filesystem::path &p) {
        std::ifstream in(p, std::ios::binary);
        if (!in)
            throw IoError("cannot open '" + p.string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string csv = slurp(csv_path);
    const auto side = summary_path_for(csv_path);
    const std::string summary = std::filesystem::exists(side) ? slurp(side) : std::string();
    return parse_rays_text(csv, summary, csv_path.filename().string());
}

void write_rays(const std::vector<PairRecord> &records, const std::filesystem::path &csv_path)
{
    auto put = [](const std::filesystem::path &p, const std::string &s) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out || !(out << s) || !out.flush())
            throw IoError("cannot write '" + p.string() + "'");
    };
    put(csv_path, format_rays_csv(records));
    put(summary_path_for(csv_path), format_summary_json(records));
}

} // namespace chanforge
