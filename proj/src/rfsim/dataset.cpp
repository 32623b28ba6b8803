#include "hopscatter/rfsim/dataset.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hopscatter/core/io.hpp"
#include "hopscatter/core/rng.hpp"

namespace hopscatter::rfsim {

using nlohmann::json;

Dataset gen_dataset(const ScenarioPreset& preset, std::size_t n_trajectories,
                    const core::SystemConfig& cfg, std::uint64_t seed,
                    const GenOptions& options) {
    if (n_trajectories < 1) {
        throw std::invalid_argument("gen_dataset: need at least one trajectory");
    }
    preset.validate();
    cfg.validate();

    Dataset ds;
    ds.manifest.preset_name = preset.name;
    ds.manifest.config = cfg;
    ds.manifest.seed = seed;
    ds.manifest.n_trajectories = n_trajectories;
    ds.manifest.window_ticks = options.window_ticks;
    ds.manifest.read_rate_hz = options.read_rate_hz;
    ds.manifest.slot_duration_s = options.slot_duration_s;
    ds.manifest.trajectory_duration_s = options.trajectory_duration_s;

    const std::size_t n_ant = cfg.antenna_count();
    const std::size_t t_window = options.window_ticks;
    std::size_t window_id = 0;

    for (std::size_t i = 0; i < n_trajectories; ++i) {
        const core::Trajectory traj =
            random_trajectory(cfg, seed, i, options.trajectory_duration_s, options.read_rate_hz);

        const std::uint64_t hop_seed = core::CounterRng(seed, "hop-seed", i).next_u64();
        const HopSchedule schedule(hop_seed, ds.manifest.plan, options.slot_duration_s);

        core::SystemConfig traj_cfg = cfg;
        traj_cfg.seed = core::CounterRng(seed, "noise-seed", i).next_u64();

        const std::vector<TagRead> reads =
            simulate_reads(traj, traj_cfg, schedule, preset, options.read_rate_hz);
        const std::size_t ticks = reads.size() / n_ant;
        const std::size_t windows = ticks / t_window;
        if (i == 0) {
            ds.manifest.windows_per_trajectory = windows;
        }

        ScenarioPreset clean = preset;  // labels carry geometry, not measurement noise
        clean.phase_noise_sigma = 0.0;
        clean.rssi_noise_sigma = 0.0;

        for (std::size_t w = 0; w < windows; ++w) {
            DatasetWindow win;
            win.window_id = window_id++;
            win.trajectory_id = i;
            const std::size_t first_read = w * t_window * n_ant;
            win.reads.assign(reads.begin() + static_cast<std::ptrdiff_t>(first_read),
                             reads.begin() + static_cast<std::ptrdiff_t>(first_read + t_window * n_ant));
            win.label_phase_ref.reserve(win.reads.size());
            win.label_rssi_dehopped.reserve(win.reads.size());
            for (const TagRead& r : win.reads) {
                const core::Position2D p = traj.at(r.t);
                win.label_phase_ref.push_back(
                    theoretical_phase(p, cfg.antennas[r.antenna_id], cfg.f_ref_hz));
                win.label_rssi_dehopped.push_back(
                    rssi_model(p, cfg.antennas[r.antenna_id], cfg.f_ref_hz, clean));
            }
            win.truth.reserve(t_window);
            for (std::size_t k = 0; k < t_window; ++k) {
                const double t = win.reads[k * n_ant].t;
                win.truth.push_back({t, traj.at(t)});
            }
            ds.windows.push_back(std::move(win));
        }
    }
    ds.manifest.window_count = ds.windows.size();
    return ds;
}

namespace {

json manifest_to_json(const DatasetManifest& m) {
    json j;
    j["preset"] = m.preset_name;
    j["config"] = json::parse(m.config.to_json_text());
    j["plan"] = {{"base_hz", m.plan.base_hz}, {"spacing_hz", m.plan.spacing_hz}, {"count", m.plan.count}};
    j["seed"] = m.seed;
    j["n_trajectories"] = m.n_trajectories;
    j["window_ticks"] = m.window_ticks;
    j["read_rate_hz"] = m.read_rate_hz;
    j["slot_duration_s"] = m.slot_duration_s;
    j["trajectory_duration_s"] = m.trajectory_duration_s;
    j["windows_per_trajectory"] = m.windows_per_trajectory;
    j["window_count"] = m.window_count;
    return j;
}

DatasetManifest manifest_from_json(const json& j) {
    DatasetManifest m;
    m.preset_name = j.at("preset").get<std::string>();
    m.config = core::SystemConfig::from_json_text(j.at("config").dump());
    m.plan.base_hz = j.at("plan").at("base_hz").get<double>();
    m.plan.spacing_hz = j.at("plan").at("spacing_hz").get<double>();
    m.plan.count = j.at("plan").at("count").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.n_trajectories = j.at("n_trajectories").get<std::size_t>();
    m.window_ticks = j.at("window_ticks").get<std::size_t>();
    m.read_rate_hz = j.at("read_rate_hz").get<double>();
    m.slot_duration_s = j.at("slot_duration_s").get<double>();
    m.trajectory_duration_s = j.at("trajectory_duration_s").get<double>();
    m.windows_per_trajectory = j.at("windows_per_trajectory").get<std::size_t>();
    m.window_count = j.at("window_count").get<std::size_t>();
    return m;
}

}  // namespace

void write_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    const std::size_t channels = ds.manifest.plan.count;
    std::ostringstream lines;
    for (const auto& w : ds.windows) {
        json rec;
        rec["window_id"] = w.window_id;
        json inputs = json::array();
        for (const TagRead& r : w.reads) {
            json row = json::array();
            row.push_back(r.t);
            row.push_back(r.antenna_id);
            for (std::size_t c = 0; c < channels; ++c) {
                row.push_back(r.channel_id && *r.channel_id == c ? 1 : 0);
            }
            row.push_back(r.phase);
            row.push_back(r.rssi);
            inputs.push_back(std::move(row));
        }
        rec["inputs"] = std::move(inputs);
        json labels = json::array();
        for (std::size_t i = 0; i < w.reads.size(); ++i) {
            labels.push_back({w.label_phase_ref[i], w.label_rssi_dehopped[i]});
        }
        rec["labels"] = std::move(labels);
        json truth = json::array();
        for (const auto& s : w.truth) {
            truth.push_back({s.t, s.p.x, s.p.y});
        }
        rec["truth"] = std::move(truth);
        lines << rec.dump() << '\n';
    }
    core::atomic_write_file(dir / "windows.jsonl", lines.str());
    core::atomic_write_file(dir / "manifest.json", manifest_to_json(ds.manifest).dump(2) + "\n");
}

Dataset load_dataset(const std::filesystem::path& dir) {
    Dataset ds;
    ds.manifest = manifest_from_json(json::parse(core::read_file(dir / "manifest.json")));
    const std::size_t channels = ds.manifest.plan.count;
    const std::size_t n_ant = ds.manifest.config.antenna_count();

    std::istringstream in(core::read_file(dir / "windows.jsonl"));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const json rec = json::parse(line);
        DatasetWindow w;
        w.window_id = rec.at("window_id").get<std::size_t>();
        w.trajectory_id = ds.manifest.windows_per_trajectory
                              ? w.window_id / ds.manifest.windows_per_trajectory
                              : 0;
        for (const auto& row : rec.at("inputs")) {
            if (row.size() != 2 + channels + 2) {
                throw std::runtime_error("load_dataset: malformed input row in " +
                                         (dir / "windows.jsonl").string());
            }
            TagRead r;
            r.t = row[0].get<double>();
            r.antenna_id = row[1].get<std::size_t>();
            for (std::size_t c = 0; c < channels; ++c) {
                if (row[2 + c].get<int>() == 1) {
                    r.channel_id = c;
                    break;
                }
            }
            r.phase = row[2 + channels].get<double>();
            r.rssi = row[3 + channels].get<double>();
            w.reads.push_back(r);
        }
        for (const auto& lab : rec.at("labels")) {
            w.label_phase_ref.push_back(lab[0].get<double>());
            w.label_rssi_dehopped.push_back(lab[1].get<double>());
        }
        for (const auto& tr : rec.at("truth")) {
            w.truth.push_back({tr[0].get<double>(), {tr[1].get<double>(), tr[2].get<double>()}});
        }
        if (w.reads.size() != ds.manifest.window_ticks * n_ant) {
            throw std::runtime_error("load_dataset: window size mismatch in " +
                                     (dir / "windows.jsonl").string());
        }
        ds.windows.push_back(std::move(w));
    }
    if (ds.windows.size() != ds.manifest.window_count) {
        throw std::runtime_error("load_dataset: window count differs from manifest in " + dir.string());
    }
    return ds;
}

std::vector<TrajectoryStream> trajectory_streams(const Dataset& ds) {
    std::vector<TrajectoryStream> out;
    for (const auto& w : ds.windows) {
        if (out.empty() || out.back().trajectory_id != w.trajectory_id) {
            out.push_back({w.trajectory_id, {}, {}});
        }
        auto& s = out.back();
        s.reads.insert(s.reads.end(), w.reads.begin(), w.reads.end());
        for (const auto& smp : w.truth) {
            s.truth.append(smp.t, smp.p);
        }
    }
    return out;
}

}  // namespace hopscatter::rfsim
