#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hopscatter/core/config.hpp"
#include "hopscatter/core/geometry.hpp"
#include "hopscatter/rfsim/channel.hpp"
#include "hopscatter/rfsim/propagation.hpp"

namespace hopscatter::rfsim {

/// One backscatter observation. channel_id is present only in the legitimate
/// (schedule-holding) view.
struct TagRead {
    double t = 0.0;
    std::size_t antenna_id = 0;
    std::optional<std::size_t> channel_id;
    double phase = 0.0;  // wrapped to [0, 2*pi)
    double rssi = 0.0;   // dBm
};

/// Per-antenna phases for one read tick, all referred to freq_hz.
struct PhaseTick {
    double t = 0.0;
    double freq_hz = 0.0;
    std::vector<double> phases;  // one per antenna, wrapped
};

inline constexpr double kDefaultReadRate = 200.0;     // Hz per antenna
inline constexpr double kDefaultSlotDuration = 0.02;  // seconds

/// Simulates one read per antenna per tick along the trajectory. Phase and
/// RSSI noise are drawn from streams keyed by cfg.seed, so identical inputs
/// reproduce identical read lists.
std::vector<TagRead> simulate_reads(const core::Trajectory& traj, const core::SystemConfig& cfg,
                                    const HopSchedule& schedule, const ScenarioPreset& preset,
                                    double read_rate_hz = kDefaultReadRate);

/// What an eavesdropper without the hop schedule sees: the same reads with
/// every channel id removed.
std::vector<TagRead> eavesdropper_view(std::span<const TagRead> reads);

/// Groups a read list (ordered tick-major, antenna-minor) into per-tick phase
/// vectors. Reads are taken as being at assumed_freq_hz regardless of their
/// channel; use for the eavesdropper path or already de-hopped streams.
std::vector<PhaseTick> reads_to_ticks(std::span<const TagRead> reads, std::size_t antenna_count,
                                      double assumed_freq_hz);

/// Oracle de-hopping: shifts each read's phase from its hop channel to
/// cfg.f_ref_hz using the ground-truth tag-antenna distance. Only valid in
/// simulation where the true trajectory is known; tests use it to isolate
/// tracker correctness from recovery quality.
std::vector<PhaseTick> analytic_dehop(std::span<const TagRead> reads, const core::Trajectory& truth,
                                      const HopSchedule& schedule, const core::SystemConfig& cfg);

/// Seeded smooth random trajectory: constant speed in [0.1, 0.3] m/s, heading
/// random walk, reflected at a safety margin inside the workspace.
core::Trajectory random_trajectory(const core::SystemConfig& cfg, std::uint64_t seed,
                                   std::uint64_t traj_index, double duration_s,
                                   double tick_rate_hz = kDefaultReadRate);

}  // namespace hopscatter::rfsim
