#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hopscatter/core/config.hpp"
#include "hopscatter/core/geometry.hpp"
#include "hopscatter/rfsim/channel.hpp"
#include "hopscatter/rfsim/simulate.hpp"

namespace hopscatter::locate {

/// One measured phase difference between adjacent antennas (i, i+1), taken at
/// a known carrier frequency: delta = wrap(theta_i - theta_{i+1}).
struct PairDiff {
    std::size_t pair_index = 0;  // between antennas pair_index and pair_index+1
    double freq_hz = 0.0;
    double delta_phase = 0.0;
};

/// Confidence of candidate position p: the sum over measurements of an
/// unnormalized Gaussian kernel on the wrapped residual between the measured
/// and theoretical pair differences. Maximal (= measurement count) when the
/// measurements match theory exactly.
double confidence(const core::Position2D& p, std::span<const PairDiff> measured,
                  const core::SystemConfig& cfg);

struct ConfidenceMap {
    core::WorkspaceGrid grid;
    std::vector<double> values;  // x-major: index = ix * ny + iy

    std::string to_csv() const;
};

struct InitialEstimate {
    core::Position2D position;  // a grid node
    double v = 0.0;
    double runner_up_gap = 0.0;
};

/// Exhaustive grid argmax of the confidence. Ties break toward the lowest x,
/// then lowest y (the iteration order).
std::pair<InitialEstimate, ConfidenceMap> initial_position_from_pairdiffs(
    std::span<const PairDiff> measured, const core::SystemConfig& cfg);

/// Builds adjacent-pair differences from a window of reads (one read per
/// antenna per tick). Reads with a channel id use that channel's frequency;
/// reads without one are taken at cfg.f_ref_hz (the eavesdropper assumption).
/// Throws when any antenna is missing from the window.
std::vector<PairDiff> pair_diffs_from_reads(std::span<const rfsim::TagRead> window,
                                            const rfsim::ChannelPlan& plan,
                                            const core::SystemConfig& cfg);

std::vector<PairDiff> pair_diffs_from_ticks(std::span<const rfsim::PhaseTick> ticks,
                                            const core::SystemConfig& cfg);

/// Two-stage entry point on raw reads: pair differences from the window, then
/// the grid search.
std::pair<InitialEstimate, ConfidenceMap> initial_position(std::span<const rfsim::TagRead> window,
                                                           const rfsim::ChannelPlan& plan,
                                                           const core::SystemConfig& cfg);

}  // namespace hopscatter::locate
