#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hopscatter/core/geometry.hpp"
#include "hopscatter/neural/params.hpp"
#include "hopscatter/rfsim/dataset.hpp"

namespace hopscatter::evalx {

/// Position-regression baselines. They consume the same windowed features as
/// the recovery model but predict keypoint positions directly, skipping the
/// recovery + tracking stages.
struct BaselineSpec {
    enum class Kind { kMlp, kCnn, kSvrLinear };
    Kind kind = Kind::kMlp;
    std::size_t hidden = 64;
    std::size_t epochs = 30;
    double learning_rate = 1e-3;
    std::size_t batch_size = 32;
    // linear epsilon-insensitive regression settings
    double svr_epsilon = 0.001;  // meters
    double svr_c = 1.0;

    static BaselineSpec mlp();
    static BaselineSpec cnn();
    static BaselineSpec svr_linear();
    static BaselineSpec by_name(const std::string& name);
    std::string name() const;
};

class BaselineModel {
public:
    static BaselineModel train(const BaselineSpec& spec, const rfsim::Dataset& dataset,
                               std::uint64_t seed);

    /// Positions for every tick of a window, in workspace meters.
    std::vector<core::Position2D> predict_window(const rfsim::DatasetWindow& w,
                                                 const rfsim::DatasetManifest& m) const;

    /// Concatenated per-trajectory prediction over a whole dataset.
    std::vector<core::Trajectory> predict_trajectories(const rfsim::Dataset& dataset) const;

    const BaselineSpec& spec() const { return spec_; }

private:
    BaselineSpec spec_;
    core::WorkspaceGrid workspace_;
    std::size_t window_ticks_ = 0;
    std::size_t width_ = 0;  // per-tick feature width
    neural::ParamStore params_;
};

}  // namespace hopscatter::evalx
