#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hopscatter/core/config.hpp"
#include "hopscatter/rfsim/channel.hpp"
#include "hopscatter/rfsim/propagation.hpp"
#include "hopscatter/rfsim/simulate.hpp"

namespace hopscatter::rfsim {

/// One training window: a fixed number of consecutive read ticks with
/// per-read de-hopped labels and the ground-truth path underneath.
struct DatasetWindow {
    std::size_t window_id = 0;
    std::size_t trajectory_id = 0;
    std::vector<TagRead> reads;               // window_ticks * antenna_count, legitimate view
    std::vector<double> label_phase_ref;      // per read, wrapped phase at f_ref
    std::vector<double> label_rssi_dehopped;  // per read, noise-free dBm at f_ref
    std::vector<core::Trajectory::Sample> truth;  // per tick
};

struct DatasetManifest {
    std::string preset_name;
    core::SystemConfig config;
    ChannelPlan plan;
    std::uint64_t seed = 0;
    std::size_t n_trajectories = 0;
    std::size_t window_ticks = 8;
    double read_rate_hz = kDefaultReadRate;
    double slot_duration_s = kDefaultSlotDuration;
    double trajectory_duration_s = 2.0;
    std::size_t windows_per_trajectory = 0;
    std::size_t window_count = 0;
};

struct Dataset {
    DatasetManifest manifest;
    std::vector<DatasetWindow> windows;

    std::size_t antenna_count() const { return manifest.config.antenna_count(); }
};

struct GenOptions {
    std::size_t window_ticks = 8;
    double read_rate_hz = kDefaultReadRate;
    double slot_duration_s = kDefaultSlotDuration;
    double trajectory_duration_s = 2.0;
};

/// Simulates n seeded trajectories under the preset and windows the reads.
/// A pure function of (preset, n, cfg, seed, options).
Dataset gen_dataset(const ScenarioPreset& preset, std::size_t n_trajectories,
                    const core::SystemConfig& cfg, std::uint64_t seed,
                    const GenOptions& options = {});

/// Emits dir/windows.jsonl (one record per window) and dir/manifest.json.
void write_dataset(const Dataset& ds, const std::filesystem::path& dir);

Dataset load_dataset(const std::filesystem::path& dir);

/// Full read stream and truth of one trajectory, reassembled from its windows.
struct TrajectoryStream {
    std::size_t trajectory_id = 0;
    std::vector<TagRead> reads;
    core::Trajectory truth;
};

std::vector<TrajectoryStream> trajectory_streams(const Dataset& ds);

}  // namespace hopscatter::rfsim
