#include "hopscatter/recovery/train.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hopscatter/core/io.hpp"
#include "hopscatter/neural/adam.hpp"

namespace hopscatter::recovery {

using nlohmann::json;

TrainHyper TrainHyper::desk_scale() {
    TrainHyper h;
    h.batch_size = 32;
    return h;
}

TrainHyper TrainHyper::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("TrainHyper: malformed JSON: ") + e.what());
    }
    const std::set<std::string> known = {"learning_rate", "batch_size",     "max_epochs",
                                         "loss_threshold", "dropout",       "l2_coefficient",
                                         "lambda_aux",     "val_fraction"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) {
            throw std::invalid_argument("TrainHyper: unknown key '" + key + "'");
        }
    }
    TrainHyper h;
    if (j.contains("learning_rate")) h.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("batch_size")) h.batch_size = j.at("batch_size").get<std::size_t>();
    if (j.contains("max_epochs")) h.max_epochs = j.at("max_epochs").get<std::size_t>();
    if (j.contains("loss_threshold")) h.loss_threshold = j.at("loss_threshold").get<double>();
    if (j.contains("dropout")) h.dropout = j.at("dropout").get<double>();
    if (j.contains("l2_coefficient")) h.l2_coefficient = j.at("l2_coefficient").get<double>();
    if (j.contains("lambda_aux")) h.lambda_aux = j.at("lambda_aux").get<double>();
    if (j.contains("val_fraction")) h.val_fraction = j.at("val_fraction").get<double>();
    return h;
}

TrainHyper TrainHyper::from_json_file(const std::filesystem::path& path) {
    return from_json_text(core::read_file(path));
}

json TrainReport::to_json() const {
    json j;
    j["stop_reason"] = stop_reason;
    j["final_epoch"] = final_epoch;
    json eps = json::array();
    for (const auto& e : epochs) {
        eps.push_back({{"epoch", e.epoch},
                       {"train_loss", e.train_loss},
                       {"val_loss", e.val_loss},
                       {"phase_term", e.phase_term},
                       {"aux_term", e.aux_term}});
    }
    j["epochs"] = std::move(eps);
    return j;
}

std::string TrainReport::loss_curves_csv() const {
    std::ostringstream os;
    os << "epoch,train_loss,val_loss,phase_term,aux_term\n";
    os.precision(17);
    for (const auto& e : epochs) {
        os << e.epoch << ',' << e.train_loss << ',' << e.val_loss << ',' << e.phase_term << ','
           << e.aux_term << '\n';
    }
    return os.str();
}

TrainReport train(RecoveryModel& model, const rfsim::Dataset& dataset, const TrainHyper& hyper,
                  std::uint64_t seed) {
    if (dataset.windows.empty()) {
        throw std::invalid_argument("train: empty dataset");
    }
    const auto wall_start = std::chrono::steady_clock::now();

    std::vector<WindowTensors> tensors;
    tensors.reserve(dataset.windows.size());
    for (const auto& w : dataset.windows) {
        tensors.push_back(window_tensors(w, dataset.manifest));
    }

    // 90/10 split by window id, seeded.
    std::vector<std::size_t> order(tensors.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    core::CounterRng split_rng(seed, "split");
    split_rng.shuffle(order);
    const std::size_t n_val = static_cast<std::size_t>(
        std::floor(hyper.val_fraction * static_cast<double>(order.size())));
    std::vector<std::size_t> val_ids(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<std::size_t> train_ids(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    if (train_ids.empty()) {
        throw std::invalid_argument("train: dataset too small for the validation split");
    }

    neural::AdamState adam;
    adam.lr = hyper.learning_rate;
    adam.weight_decay = hyper.l2_coefficient;

    TrainReport report;
    for (std::size_t epoch = 1; epoch <= hyper.max_epochs; ++epoch) {
        core::CounterRng shuffle_rng(seed, "shuffle", epoch);
        shuffle_rng.shuffle(train_ids);

        double epoch_loss = 0.0, epoch_phase = 0.0, epoch_aux = 0.0;
        std::size_t seen = 0;
        const std::size_t n_batches = (train_ids.size() + hyper.batch_size - 1) / hyper.batch_size;
        for (std::size_t b = 0; b < n_batches; ++b) {
            const std::size_t begin = b * hyper.batch_size;
            const std::size_t end = std::min(begin + hyper.batch_size, train_ids.size());
            model.params().zero_grads();
            for (std::size_t s = begin; s < end; ++s) {
                core::CounterRng dropout_rng(seed, "dropout", (epoch << 24) ^ train_ids[s]);
                const auto parts =
                    model.train_step_loss(tensors[train_ids[s]], hyper.lambda_aux, &dropout_rng);
                if (!std::isfinite(parts.total)) {
                    throw std::runtime_error("train: non-finite loss at epoch " +
                                             std::to_string(epoch) + ", batch " + std::to_string(b));
                }
                epoch_loss += parts.total;
                epoch_phase += parts.phase_term;
                epoch_aux += parts.aux_term;
                ++seen;
            }
            // Mean gradient over the batch.
            const double inv = 1.0 / static_cast<double>(end - begin);
            model.params().for_each([&](const std::string&, neural::Tensor&, neural::Tensor& g) {
                for (std::size_t i = 0; i < g.size(); ++i) g[i] *= inv;
            });
            neural::adam_step(model.params(), adam);
        }

        TrainReport::Epoch e;
        e.epoch = epoch;
        e.train_loss = epoch_loss / static_cast<double>(seen);
        e.phase_term = epoch_phase / static_cast<double>(seen);
        e.aux_term = epoch_aux / static_cast<double>(seen);

        double val_loss = 0.0;
        for (std::size_t id : val_ids) {
            const auto out = model.forward(tensors[id].input, neural::Mode::kEval);
            val_loss += RecoveryModel::loss(out, tensors[id].label_phase, tensors[id].label_rssi,
                                            hyper.lambda_aux)
                            .total;
        }
        e.val_loss = val_ids.empty() ? 0.0 : val_loss / static_cast<double>(val_ids.size());
        report.epochs.push_back(e);
        report.final_epoch = epoch;

        if (e.train_loss < hyper.loss_threshold) {
            report.stop_reason = "loss_threshold";
            break;
        }
    }
    if (report.stop_reason.empty()) {
        report.stop_reason = "max_epochs";
    }
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return report;
}

}  // namespace hopscatter::recovery
