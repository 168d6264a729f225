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

#include "chanforge/cli.hpp"

#include "chanforge/analysis.hpp"
#include "chanforge/canyon_tracer.hpp"
#include "chanforge/channel_synth.hpp"
#include "chanforge/errors.hpp"
#include "chanforge/io.hpp"
#include "chanforge/parallel.hpp"
#include "chanforge/ray_model.hpp"
#include "text.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>
#include <optional>

namespace chanforge
{

namespace fs = std::filesystem;

namespace
{

struct Options
{
    std::string scene;
    std::string rays;
    std::string out;
    std::string out_dir = ".";
    std::string geometric;
    std::string full;
    std::vector<std::string> channels;
    std::string array_tx = "ula:4:0.5:y";
    std::string array_rx = "ula:4:0.5:y";
    long long top_l = -1;
    std::string snr_db = "-10:30:5";
    std::string normalize = "frob";
    std::string distances = "1,2,5,10,20,50,100";
    std::optional<double> frequency_hz;
    bool align_phase = true;
    bool drop_los = false;
    bool phase_only_full = false;
    int jobs = 1;
};

// Records what a command read and wrote next to its primary output.
class Manifest
{
  public:
    explicit Manifest(const std::vector<std::string> &args)
    {
        for (std::size_t i = 0; i < args.size(); ++i)
            command_line_ += (i ? " " : "") + args[i];
    }

    void scene(const std::string &bytes) { scene_hash_ = content_hash(bytes); }
    void input(const fs::path &p, const std::string &bytes) { inputs_[p.string()] = content_hash(bytes); }
    void output(const fs::path &p, const std::string &bytes) { outputs_[p.string()] = content_hash(bytes); }

    void write(const fs::path &primary_output) const
    {
        nlohmann::ordered_json j;
        j["tool_version"] = kToolVersion;
        j["command_line"] = command_line_;
        j["scene_hash"] = scene_hash_ ? nlohmann::ordered_json(*scene_hash_) : nlohmann::ordered_json(nullptr);
        j["inputs"] = inputs_;
        j["outputs"] = outputs_;
        j["timestamp"] = timestamp();
        write_text_file(fs::path(primary_output.string() + ".manifest.json"), j.dump(2) + "\n");
    }

  private:
    static std::string timestamp()
    {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    std::string command_line_;
    std::optional<std::string> scene_hash_;
    std::map<std::string, std::string> inputs_;
    std::map<std::string, std::string> outputs_;
};

std::vector<double> parse_snr_spec(const std::string &spec)
{
    const auto parts = text::split(spec, ':');
    double lo = 0.0, hi = 0.0, step = 0.0;
    if (parts.size() != 3 || !text::parse_double(parts[0], lo) || !text::parse_double(parts[1], hi) ||
        !text::parse_double(parts[2], step))
        throw ValidationError("--snr-db expects lo:hi:step, got '" + spec + "'");
    return snr_grid_db(lo, hi, step);
}

std::vector<double> parse_distance_list(const std::string &spec)
{
    std::vector<double> d;
    for (auto part : text::split(spec, ','))
    {
        double v = 0.0;
        if (!text::parse_double(part, v))
            throw ValidationError("--distances expects a comma-separated list of meters, got '" + spec + "'");
        d.push_back(v);
    }
    return d;
}

std::size_t top_l_of(const Options &o) { return o.top_l < 0 ? kAllRays : static_cast<std::size_t>(o.top_l); }

Scene scene_from(const Options &o, Manifest &m)
{
    if (o.scene.empty())
    {
        Scene s = Scene::default_scene();
        m.scene(scene_to_json(s));
        return s;
    }
    const std::string bytes = read_text_file(o.scene);
    m.scene(bytes);
    m.input(o.scene, bytes);
    return parse_scene_json(bytes);
}

void emit(Manifest &m, const fs::path &p, const std::string &bytes)
{
    write_text_file(p, bytes);
    m.output(p, bytes);
}

// ------------------------------------------------------------------------

int cmd_trace(const Options &o, Manifest &m, std::ostream &out)
{
    const Scene scene = scene_from(o, m);
    const auto records = trace_scene(scene, {o.drop_los}, o.jobs);
    const fs::path csv = o.out;
    emit(m, csv, format_rays_csv(records));
    emit(m, summary_path_for(csv), format_summary_json(records));
    m.write(csv);
    std::size_t n = 0;
    for (const auto &r : records)
        n += r.rays.size();
    out << "traced " << records.size() << " pair(s), " << n << " ray(s) -> " << csv.string() << "\n";
    return kExitOk;
}

int cmd_synth(const Options &o, Manifest &m, std::ostream &out)
{
    const fs::path csv = o.rays;
    m.input(csv, read_text_file(csv));
    if (fs::exists(summary_path_for(csv)))
        m.input(summary_path_for(csv), read_text_file(summary_path_for(csv)));
    auto records = parse_rays(csv);
    const ArrayConfig txc = parse_array_descriptor(o.array_tx);
    const ArrayConfig rxc = parse_array_descriptor(o.array_rx);

    std::vector<ChannelMatrix> channels;
    for (auto &rec : records)
    {
        if (o.frequency_hz)
            rec.frequency_hz = *o.frequency_hz;
        channels.push_back(geometric_channel(rec, txc, rxc, top_l_of(o), o.jobs));
    }
    emit(m, o.out, format_channel_set(channels));
    m.write(o.out);
    out << "synthesized " << channels.size() << " geometric channel(s) -> " << o.out << "\n";
    return kExitOk;
}

int cmd_fullsim(const Options &o, Manifest &m, std::ostream &out)
{
    const Scene scene = scene_from(o, m);
    const ArrayConfig txc = parse_array_descriptor(o.array_tx);
    const ArrayConfig rxc = parse_array_descriptor(o.array_rx);

    std::vector<ChannelMatrix> channels(scene.rx_list.size());
    parallel_for(channels.size(), o.jobs, [&](std::size_t i) {
        const Receiver &rx = scene.rx_list[i];
        const auto paths = trace_paths(scene, rx.position, {o.drop_los});
        channels[i] = full_array_channel(paths, txc.at(scene.tx), rxc.at(rx.position), scene.frequency_hz,
                                         {o.phase_only_full, 1});
        channels[i].tx_id = scene.tx_id;
        channels[i].rx_id = rx.id;
    });
    emit(m, o.out, format_channel_set(channels));
    m.write(o.out);
    out << "simulated " << channels.size() << " full-array channel(s) -> " << o.out << "\n";
    return kExitOk;
}

int cmd_compare(const Options &o, Manifest &m, std::ostream &out)
{
    const std::string gbytes = read_text_file(o.geometric);
    const std::string fbytes = read_text_file(o.full);
    m.input(o.geometric, gbytes);
    m.input(o.full, fbytes);
    const auto approx = parse_channel_set(gbytes);
    const auto reference = parse_channel_set(fbytes);
    std::optional<Scene> scene;
    if (!o.scene.empty())
        scene = scene_from(o, m);

    std::vector<ErrorReport> reports;
    for (const auto &a : approx)
    {
        const auto it = std::find_if(reference.begin(), reference.end(), [&](const ChannelMatrix &b) {
            return b.tx_id == a.tx_id && b.rx_id == a.rx_id;
        });
        if (it == reference.end())
            throw ValidationError("compare: no reference channel for pair " + a.pair_key());
        ErrorReport r = channel_error(a, *it);
        r.los = !o.drop_los;
        if (scene)
            for (const auto &rx : scene->rx_list)
                if (rx.id == a.rx_id)
                    r.tx_rx_distance_m = distance(scene->tx, rx.position);
        out << r.pair << " " << (o.align_phase ? "aligned" : "raw") << " error "
            << format_double(o.align_phase ? r.aligned_error_pct : r.raw_error_pct) << " %\n";
        reports.push_back(std::move(r));
    }
    emit(m, o.out, format_errors_csv(reports));
    m.write(o.out);
    return kExitOk;
}

int cmd_capacity(const Options &o, Manifest &m, std::ostream &out)
{
    const auto grid = parse_snr_spec(o.snr_db);
    const Normalization norm = parse_normalization(o.normalize);
    std::vector<CapacityCurve> curves;
    for (const auto &path : o.channels)
    {
        const std::string bytes = read_text_file(path);
        m.input(path, bytes);
        for (const auto &h : parse_channel_set(bytes))
            curves.push_back(capacity_curve(h, grid, norm));
    }
    emit(m, o.out, format_capacity_csv(curves));
    m.write(o.out);
    out << "capacity for " << curves.size() << " channel(s) over " << grid.size() << " SNR point(s) -> " << o.out
        << "\n";
    return kExitOk;
}

int cmd_sweep(const Options &o, Manifest &m, std::ostream &out)
{
    SweepConfig cfg;
    cfg.scene = scene_from(o, m);
    cfg.distances_m = parse_distance_list(o.distances);
    cfg.tx_cfg = parse_array_descriptor(o.array_tx);
    cfg.rx_cfg = parse_array_descriptor(o.array_rx);
    cfg.top_l = top_l_of(o);
    cfg.snr_db = parse_snr_spec(o.snr_db);
    cfg.normalization = parse_normalization(o.normalize);
    cfg.drop_los = o.drop_los;
    cfg.phase_only_full = o.phase_only_full;
    cfg.jobs = o.jobs;

    const auto points = distance_sweep(cfg);
    std::vector<CapacityCurve> curves;
    for (const auto &p : points)
    {
        curves.push_back(p.geometric);
        curves.push_back(p.full);
        out << format_double(p.distance_m) << " m: " << (o.align_phase ? "aligned" : "raw") << " error "
            << format_double(o.align_phase ? p.error.aligned_error_pct : p.error.raw_error_pct) << " %\n";
    }
    const fs::path dir = o.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    emit(m, dir / "sweep.csv", format_sweep_csv(points));
    emit(m, dir / "capacity.csv", format_capacity_csv(curves));
    m.write(dir / "sweep.csv");
    return kExitOk;
}

void add_arrays(CLI::App *sub, Options &o)
{
    sub->add_option("--array-tx", o.array_tx, "Transmit ULA, ula:<n>:<spacing_wl>:<axis>")->capture_default_str();
    sub->add_option("--array-rx", o.array_rx, "Receive ULA, ula:<n>:<spacing_wl>:<axis>")->capture_default_str();
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"chanforge: geometric and full-array MIMO channels from ray-traced paths"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    Options o;

    auto *trace = app.add_subcommand("trace", "Trace all receivers of a scene into rays.csv + summary sidecar");
    trace->add_option("--scene", o.scene, "Scene JSON (default scene when omitted)");
    trace->add_option("--out", o.out, "Output rays CSV")->required();
    trace->add_flag("--drop-los", o.drop_los, "Omit line-of-sight paths");
    trace->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();

    auto *synth = app.add_subcommand("synth", "Geometric channels from a rays CSV");
    synth->add_option("--rays", o.rays, "Rays CSV")->required();
    add_arrays(synth, o);
    synth->add_option("--top-l", o.top_l, "Keep the L strongest rays per pair (-1: all)")->capture_default_str();
    synth->add_option("--frequency-hz", o.frequency_hz, "Override the carrier frequency of every pair");
    synth->add_option("--out", o.out, "Output channel set JSON")->required();
    synth->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();

    auto *fullsim = app.add_subcommand("fullsim", "Per-element spherical-wave channels for a scene");
    fullsim->add_option("--scene", o.scene, "Scene JSON (default scene when omitted)");
    add_arrays(fullsim, o);
    fullsim->add_flag("--drop-los", o.drop_los, "Omit line-of-sight paths");
    fullsim->add_flag("--phase-only-full", o.phase_only_full, "Per-element phase with path-centre amplitude");
    fullsim->add_option("--out", o.out, "Output channel set JSON")->required();
    fullsim->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();

    auto *compare = app.add_subcommand("compare", "Error of geometric channels against full-array channels");
    compare->add_option("--geometric", o.geometric, "Channel set under test")->required();
    compare->add_option("--full", o.full, "Reference channel set")->required();
    compare->add_option("--scene", o.scene, "Scene JSON used to fill distance_m");
    compare->add_flag("--drop-los", o.drop_los, "Mark pairs as non-line-of-sight");
    compare->add_flag("--align-phase,!--no-align-phase", o.align_phase, "Report the phase-aligned error");
    compare->add_option("--out", o.out, "Output errors CSV")->required();

    auto *cap = app.add_subcommand("capacity", "Equal-power log-det capacity over an SNR grid");
    cap->add_option("--channels", o.channels, "Channel set JSON file(s)")->required();
    cap->add_option("--snr-db", o.snr_db, "SNR grid lo:hi:step in dB")->capture_default_str();
    cap->add_option("--normalize", o.normalize, "raw | frob")->capture_default_str();
    cap->add_option("--out", o.out, "Output capacity CSV")->required();

    auto *sweep = app.add_subcommand("sweep", "Error and capacity versus TX-RX distance along the street axis");
    sweep->add_option("--scene", o.scene, "Scene JSON template (receivers ignored)");
    sweep->add_option("--distances", o.distances, "Comma-separated distances in meters")->capture_default_str();
    add_arrays(sweep, o);
    sweep->add_option("--top-l", o.top_l, "Keep the L strongest rays per pair (-1: all)")->capture_default_str();
    sweep->add_option("--snr-db", o.snr_db, "SNR grid lo:hi:step in dB")->capture_default_str();
    sweep->add_option("--normalize", o.normalize, "raw | frob")->capture_default_str();
    sweep->add_flag("--drop-los", o.drop_los, "Omit line-of-sight paths");
    sweep->add_flag("--phase-only-full", o.phase_only_full, "Per-element phase with path-centre amplitude");
    sweep->add_flag("--align-phase,!--no-align-phase", o.align_phase, "Report the phase-aligned error");
    sweep->add_option("--out-dir", o.out_dir, "Directory for sweep.csv and capacity.csv")->capture_default_str();
    sweep->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    Manifest manifest(args);
    try
    {
        if (o.jobs < 1)
            throw ValidationError("--jobs must be >= 1");
        if (*trace)
            return cmd_trace(o, manifest, out);
        if (*synth)
            return cmd_synth(o, manifest, out);
        if (*fullsim)
            return cmd_fullsim(o, manifest, out);
        if (*compare)
            return cmd_compare(o, manifest, out);
        if (*cap)
            return cmd_capacity(o, manifest, out);
        if (*sweep)
            return cmd_sweep(o, manifest, out);
    }
    catch (const ValidationError &e)
    {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    catch (const IoError &e)
    {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    }
    catch (const NumericError &e)
    {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    catch (const std::exception &e)
    {
        err << "internal error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitValidation;
}

} // namespace chanforge
