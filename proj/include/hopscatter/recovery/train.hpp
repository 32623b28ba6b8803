#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopscatter/recovery/model.hpp"
#include "hopscatter/rfsim/dataset.hpp"

namespace hopscatter::recovery {

/// Training hyperparameters. Defaults are the paper-scale recipe; the desk
/// preset shrinks the batch for small simulated datasets.
struct TrainHyper {
    double learning_rate = 1e-3;
    std::size_t batch_size = 256;
    std::size_t max_epochs = 300;
    double loss_threshold = 0.01;
    double dropout = 0.1;
    double l2_coefficient = 1e-4;
    double lambda_aux = 0.1;
    double val_fraction = 0.1;

    static TrainHyper desk_scale();

    static TrainHyper from_json_text(const std::string& text);
    static TrainHyper from_json_file(const std::filesystem::path& path);
};

struct TrainReport {
    struct Epoch {
        std::size_t epoch = 0;
        double train_loss = 0.0;
        double val_loss = 0.0;
        double phase_term = 0.0;
        double aux_term = 0.0;
    };
    std::vector<Epoch> epochs;
    std::string stop_reason;  // "max_epochs" or "loss_threshold"
    std::size_t final_epoch = 0;
    double wall_time_s = 0.0;

    /// Canonical JSON. Wall time is reported on the console only; the emitted
    /// file stays byte-identical across reruns of the same seed.
    nlohmann::json to_json() const;
    std::string loss_curves_csv() const;
};

/// Adam training with a seeded 90/10 train/validation split by window id.
/// Stops at max_epochs or when the epoch's mean train loss drops below the
/// threshold. Aborts with epoch/batch diagnostics on a non-finite loss.
TrainReport train(RecoveryModel& model, const rfsim::Dataset& dataset, const TrainHyper& hyper,
                  std::uint64_t seed);

}  // namespace hopscatter::recovery
