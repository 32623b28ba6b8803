#include "hopscatter/locate/confidence.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hopscatter/core/angles.hpp"
#include "hopscatter/rfsim/propagation.hpp"

namespace hopscatter::locate {

double confidence(const core::Position2D& p, std::span<const PairDiff> measured,
                  const core::SystemConfig& cfg) {
    if (measured.empty()) {
        throw std::invalid_argument("confidence: at least one pair difference required");
    }
    const double sigma = cfg.kernel_sigma;
    const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
    double v = 0.0;
    for (const PairDiff& m : measured) {
        if (m.pair_index + 1 >= cfg.antenna_count()) {
            throw std::invalid_argument("confidence: pair index out of range");
        }
        const double theo = core::wrap_phase(
            rfsim::theoretical_phase(p, cfg.antennas[m.pair_index], m.freq_hz) -
            rfsim::theoretical_phase(p, cfg.antennas[m.pair_index + 1], m.freq_hz));
        const double resid = core::phase_distance(m.delta_phase, theo);
        v += std::exp(-resid * resid * inv_two_sigma_sq);
    }
    return v;
}

std::string ConfidenceMap::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "x,y,v\n";
    const std::size_t ny = grid.ny();
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const core::Position2D p = grid.node(ix, iy);
            os << p.x << ',' << p.y << ',' << values[ix * ny + iy] << '\n';
        }
    }
    return os.str();
}

std::pair<InitialEstimate, ConfidenceMap> initial_position_from_pairdiffs(
    std::span<const PairDiff> measured, const core::SystemConfig& cfg) {
    cfg.validate();
    ConfidenceMap map;
    map.grid = cfg.workspace;
    const std::size_t nx = map.grid.nx();
    const std::size_t ny = map.grid.ny();
    map.values.resize(nx * ny);

    InitialEstimate best;
    double best_v = -1.0;
    double runner_up = -1.0;
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const core::Position2D p = map.grid.node(ix, iy);
            const double v = confidence(p, measured, cfg);
            map.values[ix * ny + iy] = v;
            if (v > best_v) {
                runner_up = best_v;
                best_v = v;
                best.position = p;
            } else if (v > runner_up) {
                runner_up = v;
            }
        }
    }
    best.v = best_v;
    best.runner_up_gap = runner_up < 0.0 ? 0.0 : best_v - runner_up;
    return {best, std::move(map)};
}

std::vector<PairDiff> pair_diffs_from_reads(std::span<const rfsim::TagRead> window,
                                            const rfsim::ChannelPlan& plan,
                                            const core::SystemConfig& cfg) {
    if (window.empty()) {
        throw std::invalid_argument("pair_diffs_from_reads: empty window");
    }
    const std::size_t n_ant = cfg.antenna_count();
    std::set<std::size_t> seen;
    for (const auto& r : window) {
        if (r.antenna_id >= n_ant) {
            throw std::invalid_argument("pair_diffs_from_reads: antenna id out of range");
        }
        seen.insert(r.antenna_id);
    }
    if (seen.size() != n_ant) {
        throw std::invalid_argument("pair_diffs_from_reads: missing antenna coverage in window");
    }

    std::vector<PairDiff> out;
    std::vector<const rfsim::TagRead*> tick(n_ant, nullptr);
    std::size_t filled = 0;
    for (const auto& r : window) {
        if (tick[r.antenna_id] == nullptr) {
            ++filled;
        }
        tick[r.antenna_id] = &r;
        if (filled == n_ant && r.antenna_id == n_ant - 1) {
            const double freq = tick[0]->channel_id
                                    ? channel_frequency(plan, *tick[0]->channel_id)
                                    : cfg.f_ref_hz;
            for (std::size_t i = 0; i + 1 < n_ant; ++i) {
                out.push_back({i, freq,
                               core::wrap_phase(tick[i]->phase - tick[i + 1]->phase)});
            }
            tick.assign(n_ant, nullptr);
            filled = 0;
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("pair_diffs_from_reads: no complete tick in window");
    }
    return out;
}

std::vector<PairDiff> pair_diffs_from_ticks(std::span<const rfsim::PhaseTick> ticks,
                                            const core::SystemConfig& cfg) {
    const std::size_t n_ant = cfg.antenna_count();
    std::vector<PairDiff> out;
    for (const auto& tick : ticks) {
        if (tick.phases.size() != n_ant) {
            throw std::invalid_argument("pair_diffs_from_ticks: tick antenna count mismatch");
        }
        for (std::size_t i = 0; i + 1 < n_ant; ++i) {
            out.push_back({i, tick.freq_hz,
                           core::wrap_phase(tick.phases[i] - tick.phases[i + 1])});
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("pair_diffs_from_ticks: empty tick stream");
    }
    return out;
}

std::pair<InitialEstimate, ConfidenceMap> initial_position(std::span<const rfsim::TagRead> window,
                                                           const rfsim::ChannelPlan& plan,
                                                           const core::SystemConfig& cfg) {
    const auto diffs = pair_diffs_from_reads(window, plan, cfg);
    return initial_position_from_pairdiffs(diffs, cfg);
}

}  // namespace hopscatter::locate
