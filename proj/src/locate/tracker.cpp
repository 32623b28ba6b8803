#include "hopscatter/locate/tracker.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hopscatter/core/angles.hpp"
#include "hopscatter/rfsim/propagation.hpp"

namespace hopscatter::locate {

namespace {

constexpr double kConditionLimit = 1e8;

/// Least-squares displacement from per-antenna radial deltas via the 2x2
/// normal equations, guarded against near-parallel geometry.
core::Position2D solve_displacement(const core::Position2D& pos,
                                    std::span<const double> prev_phases,
                                    std::span<const double> new_phases, double f_ref_hz,
                                    const core::SystemConfig& cfg) {
    const std::size_t n = cfg.antenna_count();
    double axx = 0.0, axy = 0.0, ayy = 0.0, bx = 0.0, by = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dphi = core::signed_wrap(new_phases[i] - prev_phases[i]);
        const double dd = dphi * rfsim::kSpeedOfLight / (4.0 * core::kPi * f_ref_hz);
        const double dx = pos.x - cfg.antennas[i].x;
        const double dy = pos.y - cfg.antennas[i].y;
        const double dist = std::hypot(dx, dy);
        if (dist < 1e-6) {
            throw std::runtime_error("step_update: tag coincident with antenna " +
                                     std::to_string(i));
        }
        const double ux = dx / dist, uy = dy / dist;
        axx += ux * ux;
        axy += ux * uy;
        ayy += uy * uy;
        bx += ux * dd;
        by += uy * dd;
    }
    const double trace = axx + ayy;
    const double det = axx * ayy - axy * axy;
    const double disc = std::sqrt(std::max(0.0, trace * trace - 4.0 * det));
    const double lam_max = 0.5 * (trace + disc);
    const double lam_min = 0.5 * (trace - disc);
    if (!(lam_min > 0.0) || lam_max / lam_min > kConditionLimit) {
        throw std::runtime_error("step_update: singular update (antenna unit vectors parallel)");
    }
    return {(ayy * bx - axy * by) / det, (axx * by - axy * bx) / det};
}

}  // namespace

core::Position2D step_update(TrackerState& state, std::span<const double> phases, double t,
                             const core::SystemConfig& cfg) {
    if (phases.size() != cfg.antenna_count()) {
        throw std::invalid_argument("step_update: phase count does not match antenna count");
    }
    if (!(t > state.last_t)) {
        throw std::invalid_argument("step_update: timestamp not increasing");
    }
    const core::Position2D delta =
        solve_displacement(state.position, state.prev_phases, phases, state.f_ref_hz, cfg);
    state.position.x += delta.x;
    state.position.y += delta.y;
    state.prev_phases.assign(phases.begin(), phases.end());
    state.last_t = t;
    return state.position;
}

TrackResult track(std::span<const rfsim::PhaseTick> ticks, const core::SystemConfig& cfg,
                  const TrackOptions& options) {
    if (ticks.empty()) {
        throw std::invalid_argument("track: empty tick stream");
    }
    for (std::size_t i = 1; i < ticks.size(); ++i) {
        if (!(ticks[i].t > ticks[i - 1].t)) {
            throw std::invalid_argument("track: tick timestamps must be strictly increasing");
        }
    }
    cfg.validate();

    const std::size_t n_init = std::min(options.init_ticks, ticks.size());
    const auto init_window = ticks.subspan(0, n_init);
    const auto diffs = pair_diffs_from_ticks(init_window, cfg);
    auto [estimate, map] = initial_position_from_pairdiffs(diffs, cfg);
    (void)map;

    // The grid estimate reflects the tag's pose near the middle of the init
    // window; anchor there and fill the earlier ticks by stepping backward.
    const std::size_t center = (n_init - 1) / 2;
    std::vector<core::Position2D> positions(ticks.size());
    positions[center] = estimate.position;

    TrackResult result;
    result.initial = estimate;

    {
        core::Position2D pos = estimate.position;
        for (std::size_t i = center; i > 0; --i) {
            const core::Position2D delta = solve_displacement(
                pos, ticks[i].phases, ticks[i - 1].phases, ticks[i - 1].freq_hz, cfg);
            pos.x += delta.x;
            pos.y += delta.y;
            positions[i - 1] = pos;
        }
    }

    TrackerState state;
    state.position = estimate.position;
    state.prev_phases = ticks[center].phases;
    state.f_ref_hz = ticks[center].freq_hz;
    state.last_t = ticks[center].t;
    for (std::size_t i = center + 1; i < ticks.size(); ++i) {
        if (ticks[i].t - ticks[i - 1].t > options.gap_threshold_s) {
            result.wrap_risk = true;
            ++result.gap_count;
        }
        positions[i] = step_update(state, ticks[i].phases, ticks[i].t, cfg);
    }

    for (std::size_t i = 0; i < ticks.size(); ++i) {
        result.trajectory.append(ticks[i].t, positions[i]);
    }
    return result;
}

std::string trajectory_to_csv(const core::Trajectory& traj) {
    std::ostringstream os;
    os.precision(17);
    os << "t,x,y\n";
    for (const auto& s : traj.samples()) {
        os << s.t << ',' << s.p.x << ',' << s.p.y << '\n';
    }
    return os.str();
}

core::Trajectory trajectory_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,y", 0) != 0) {
        throw std::runtime_error("trajectory_from_csv: missing t,x,y header");
    }
    core::Trajectory traj;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[3] = {0, 0, 0};
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(row, cell, ',')) {
                throw std::runtime_error("trajectory_from_csv: malformed row '" + line + "'");
            }
            vals[i] = std::stod(cell);
        }
        traj.append(vals[0], {vals[1], vals[2]});
    }
    if (traj.empty()) {
        throw std::runtime_error("trajectory_from_csv: no samples");
    }
    return traj;
}

}  // namespace hopscatter::locate
