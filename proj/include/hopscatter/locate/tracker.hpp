#pragma once

#include <span>
#include <vector>

#include "hopscatter/core/config.hpp"
#include "hopscatter/core/geometry.hpp"
#include "hopscatter/locate/confidence.hpp"
#include "hopscatter/rfsim/simulate.hpp"

namespace hopscatter::locate {

/// Incremental phase-difference tracker state: current position and the last
/// wrapped phase per antenna, all at the reference frequency.
struct TrackerState {
    core::Position2D position;
    std::vector<double> prev_phases;
    double f_ref_hz = 0.0;
    double last_t = 0.0;
};

/// One tracking step: per-antenna radial displacement from the wrapped phase
/// change, then a least-squares solve for the 2-D position update. Requires
/// |wrapped phase change| < pi per antenna (the read rate guarantees this for
/// hand-speed motion). Throws on rank-deficient geometry.
core::Position2D step_update(TrackerState& state, std::span<const double> phases, double t,
                             const core::SystemConfig& cfg);

struct TrackOptions {
    /// Initial-position window length in ticks (2 hop slots at the defaults).
    std::size_t init_ticks = 8;
    /// Gaps longer than this raise the wrap-risk flag (a slot at the defaults).
    double gap_threshold_s = 0.025;
};

struct TrackResult {
    core::Trajectory trajectory;
    InitialEstimate initial;
    bool wrap_risk = false;
    std::size_t gap_count = 0;
};

/// Two-stage tracking over a stream of per-tick phases at a fixed reference
/// frequency: confidence-grid initial position over the first window (anchored
/// at the window's center tick, with the earlier ticks filled by running the
/// same update backward), then step_update per tick. The output trajectory has
/// one sample per input tick.
TrackResult track(std::span<const rfsim::PhaseTick> ticks, const core::SystemConfig& cfg,
                  const TrackOptions& options = {});

std::string trajectory_to_csv(const core::Trajectory& traj);
core::Trajectory trajectory_from_csv(const std::string& text);

}  // namespace hopscatter::locate
