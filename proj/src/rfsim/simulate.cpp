#include "hopscatter/rfsim/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "hopscatter/core/angles.hpp"
#include "hopscatter/core/rng.hpp"

namespace hopscatter::rfsim {

std::vector<TagRead> simulate_reads(const core::Trajectory& traj, const core::SystemConfig& cfg,
                                    const HopSchedule& schedule, const ScenarioPreset& preset,
                                    double read_rate_hz) {
    if (traj.empty()) {
        throw std::invalid_argument("simulate_reads: empty trajectory");
    }
    if (!(read_rate_hz > 0.0)) {
        throw std::invalid_argument("simulate_reads: read rate must be positive");
    }
    if (traj.duration() < schedule.slot_duration()) {
        throw std::invalid_argument("simulate_reads: trajectory spans less than one hop slot");
    }
    cfg.validate();
    preset.validate();

    core::CounterRng phase_noise(cfg.seed, "phase-noise");
    core::CounterRng rssi_noise(cfg.seed, "rssi-noise");

    const double t0 = traj.front().t;
    const double t_end = traj.back().t;
    const std::size_t ticks = static_cast<std::size_t>(std::floor((t_end - t0) * read_rate_hz + 1e-9)) + 1;

    std::vector<TagRead> reads;
    reads.reserve(ticks * cfg.antenna_count());
    for (std::size_t k = 0; k < ticks; ++k) {
        const double t = t0 + static_cast<double>(k) / read_rate_hz;
        const core::Position2D p = traj.at(t);
        const std::uint64_t slot = schedule.slot_of(t);
        const std::size_t channel = schedule.channel_at(slot);
        const double f = channel_frequency(schedule.plan(), channel);
        for (std::size_t a = 0; a < cfg.antenna_count(); ++a) {
            TagRead r;
            r.t = t;
            r.antenna_id = a;
            r.channel_id = channel;
            double phi = theoretical_phase(p, cfg.antennas[a], f);
            if (preset.phase_noise_sigma > 0.0) {
                phi += phase_noise.normal(0.0, preset.phase_noise_sigma);
            }
            r.phase = core::wrap_phase(phi);
            double rssi = rssi_model(p, cfg.antennas[a], f, preset);
            if (preset.rssi_noise_sigma > 0.0) {
                rssi += rssi_noise.normal(0.0, preset.rssi_noise_sigma);
            }
            r.rssi = rssi;
            reads.push_back(r);
        }
    }
    return reads;
}

std::vector<TagRead> eavesdropper_view(std::span<const TagRead> reads) {
    std::vector<TagRead> out(reads.begin(), reads.end());
    for (auto& r : out) {
        r.channel_id.reset();
    }
    return out;
}

std::vector<PhaseTick> reads_to_ticks(std::span<const TagRead> reads, std::size_t antenna_count,
                                      double assumed_freq_hz) {
    if (antenna_count == 0) {
        throw std::invalid_argument("reads_to_ticks: antenna count must be positive");
    }
    if (reads.size() % antenna_count != 0) {
        throw std::invalid_argument("reads_to_ticks: read count not a multiple of antenna count");
    }
    std::vector<PhaseTick> ticks;
    ticks.reserve(reads.size() / antenna_count);
    for (std::size_t i = 0; i < reads.size(); i += antenna_count) {
        PhaseTick tick;
        tick.t = reads[i].t;
        tick.freq_hz = assumed_freq_hz;
        tick.phases.resize(antenna_count);
        for (std::size_t a = 0; a < antenna_count; ++a) {
            const TagRead& r = reads[i + a];
            if (r.antenna_id != a || r.t != tick.t) {
                throw std::invalid_argument("reads_to_ticks: reads not tick-major/antenna-minor");
            }
            tick.phases[a] = r.phase;
        }
        ticks.push_back(std::move(tick));
    }
    return ticks;
}

std::vector<PhaseTick> analytic_dehop(std::span<const TagRead> reads, const core::Trajectory& truth,
                                      const HopSchedule& schedule, const core::SystemConfig& cfg) {
    const std::size_t n = cfg.antenna_count();
    std::vector<PhaseTick> ticks = reads_to_ticks(reads, n, cfg.f_ref_hz);
    std::size_t i = 0;
    for (auto& tick : ticks) {
        const core::Position2D p = truth.at(tick.t);
        for (std::size_t a = 0; a < n; ++a) {
            const TagRead& r = reads[i * n + a];
            if (!r.channel_id) {
                throw std::invalid_argument("analytic_dehop: read lacks channel id");
            }
            const double f_ch = channel_frequency(schedule.plan(), *r.channel_id);
            const double d = core::distance(p, cfg.antennas[a]);
            const double shift = 4.0 * core::kPi * d * (f_ch - cfg.f_ref_hz) / kSpeedOfLight;
            tick.phases[a] = core::wrap_phase(r.phase - shift);
        }
        ++i;
    }
    return ticks;
}

core::Trajectory random_trajectory(const core::SystemConfig& cfg, std::uint64_t seed,
                                   std::uint64_t traj_index, double duration_s,
                                   double tick_rate_hz) {
    if (!(duration_s > 0.0) || !(tick_rate_hz > 0.0)) {
        throw std::invalid_argument("random_trajectory: duration and tick rate must be positive");
    }
    core::CounterRng rng(seed, "trajectory", traj_index);
    const auto& ws = cfg.workspace;
    const double margin = 0.15 * std::min(ws.x_max - ws.x_min, ws.y_max - ws.y_min);
    const double x_lo = ws.x_min + margin, x_hi = ws.x_max - margin;
    const double y_lo = ws.y_min + margin, y_hi = ws.y_max - margin;

    double x = rng.uniform(x_lo, x_hi);
    double y = rng.uniform(y_lo, y_hi);
    double heading = rng.uniform(0.0, core::kTwoPi);
    const double speed = rng.uniform(0.1, 0.3);
    const double dt = 1.0 / tick_rate_hz;
    const double heading_sigma = 0.15;  // rad per tick; keeps paths smooth

    const std::size_t ticks = static_cast<std::size_t>(std::floor(duration_s * tick_rate_hz + 1e-9)) + 1;
    core::Trajectory traj;
    for (std::size_t k = 0; k < ticks; ++k) {
        traj.append(static_cast<double>(k) * dt, {x, y});
        heading += rng.normal(0.0, heading_sigma);
        double nx = x + speed * dt * std::cos(heading);
        double ny = y + speed * dt * std::sin(heading);
        if (nx < x_lo || nx > x_hi) {
            heading = core::kPi - heading;
            nx = x + speed * dt * std::cos(heading);
        }
        if (ny < y_lo || ny > y_hi) {
            heading = -heading;
            ny = y + speed * dt * std::sin(heading);
        }
        x = std::clamp(nx, x_lo, x_hi);
        y = std::clamp(ny, y_lo, y_hi);
    }
    return traj;
}

}  // namespace hopscatter::rfsim
