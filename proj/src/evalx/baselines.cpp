#include "hopscatter/evalx/baselines.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hopscatter/core/rng.hpp"
#include "hopscatter/neural/adam.hpp"
#include "hopscatter/neural/layers.hpp"
#include "hopscatter/recovery/model.hpp"

namespace hopscatter::evalx {

using neural::Tensor;

BaselineSpec BaselineSpec::mlp() {
    return {};
}

BaselineSpec BaselineSpec::cnn() {
    BaselineSpec s;
    s.kind = Kind::kCnn;
    s.hidden = 32;
    return s;
}

BaselineSpec BaselineSpec::svr_linear() {
    BaselineSpec s;
    s.kind = Kind::kSvrLinear;
    s.epochs = 60;
    s.learning_rate = 1e-2;
    return s;
}

BaselineSpec BaselineSpec::by_name(const std::string& name) {
    if (name == "mlp") return mlp();
    if (name == "cnn") return cnn();
    if (name == "svr_linear" || name == "svm") return svr_linear();
    throw std::invalid_argument("BaselineSpec: unknown baseline kind '" + name + "'");
}

std::string BaselineSpec::name() const {
    switch (kind) {
        case Kind::kMlp: return "mlp";
        case Kind::kCnn: return "cnn";
        case Kind::kSvrLinear: return "svr_linear";
    }
    return "?";
}

namespace {

struct NormBox {
    double x0, xs, y0, ys;
    explicit NormBox(const core::WorkspaceGrid& ws)
        : x0(ws.x_min), xs(ws.x_max - ws.x_min), y0(ws.y_min), ys(ws.y_max - ws.y_min) {}
    double nx(double x) const { return (x - x0) / xs; }
    double ny(double y) const { return (y - y0) / ys; }
    double dx(double v) const { return v * xs + x0; }
    double dy(double v) const { return v * ys + y0; }
};

Tensor truth_targets(const rfsim::DatasetWindow& w, const NormBox& box) {
    Tensor y({w.truth.size(), 2});
    for (std::size_t t = 0; t < w.truth.size(); ++t) {
        y.at(t, 0) = box.nx(w.truth[t].p.x);
        y.at(t, 1) = box.ny(w.truth[t].p.y);
    }
    return y;
}

Tensor flatten(const Tensor& x) {
    return Tensor({1, x.size()}, x.values());
}

}  // namespace

BaselineModel BaselineModel::train(const BaselineSpec& spec, const rfsim::Dataset& dataset,
                                   std::uint64_t seed) {
    if (dataset.windows.empty()) {
        throw std::invalid_argument("BaselineModel::train: empty dataset");
    }
    BaselineModel m;
    m.spec_ = spec;
    m.workspace_ = dataset.manifest.config.workspace;
    m.window_ticks_ = dataset.manifest.window_ticks;
    m.width_ = recovery::feature_width(dataset.antenna_count(), dataset.manifest.plan.count);
    const NormBox box(m.workspace_);

    std::vector<Tensor> inputs;
    std::vector<Tensor> targets;
    inputs.reserve(dataset.windows.size());
    for (const auto& w : dataset.windows) {
        inputs.push_back(recovery::window_tensors(w, dataset.manifest).input);
        targets.push_back(truth_targets(w, box));
    }

    core::CounterRng init_rng(seed, "baseline-init");
    auto& p = m.params_;

    if (spec.kind == BaselineSpec::Kind::kSvrLinear) {
        // Linear epsilon-insensitive regression per axis, subgradient descent.
        p.create("w", {m.width_, 2});
        p.create("b", {2});
        Tensor& w = p.param("w");
        Tensor& b = p.param("b");
        std::vector<std::size_t> order(inputs.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::size_t step = 0;
        for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
            core::CounterRng shuffle_rng(seed, "baseline-shuffle", epoch);
            shuffle_rng.shuffle(order);
            for (std::size_t wi : order) {
                const Tensor& x = inputs[wi];
                const Tensor& y = targets[wi];
                ++step;
                const double lr = spec.learning_rate / (1.0 + 0.01 * static_cast<double>(step));
                for (std::size_t t = 0; t < x.rows(); ++t) {
                    for (std::size_t axis = 0; axis < 2; ++axis) {
                        double pred = b[axis];
                        for (std::size_t j = 0; j < m.width_; ++j) {
                            pred += x.at(t, j) * w.at(j, axis);
                        }
                        const double resid = y.at(t, axis) - pred;
                        const double sg = std::abs(resid) > spec.svr_epsilon
                                              ? (resid > 0.0 ? 1.0 : -1.0)
                                              : 0.0;
                        // d/dw [ 0.5|w|^2/C + hinge ] with hinge subgradient sg
                        for (std::size_t j = 0; j < m.width_; ++j) {
                            w.at(j, axis) -= lr * (w.at(j, axis) / spec.svr_c - sg * x.at(t, j));
                        }
                        b[axis] -= lr * (-sg);
                    }
                }
            }
        }
        return m;
    }

    // Gradient-trained baselines (mlp, cnn) share the Adam loop.
    if (spec.kind == BaselineSpec::Kind::kMlp) {
        const std::size_t in = m.window_ticks_ * m.width_;
        p.create("w1", {in, spec.hidden}) = neural::xavier_init({in, spec.hidden}, init_rng);
        p.create("b1", {spec.hidden});
        const std::size_t out = m.window_ticks_ * 2;
        p.create("w2", {spec.hidden, out}) = neural::xavier_init({spec.hidden, out}, init_rng);
        p.create("b2", {out});
    } else {
        p.create("c1.w", {3, m.width_, spec.hidden}) =
            neural::xavier_init({3, m.width_, spec.hidden}, init_rng);
        p.create("c1.b", {spec.hidden});
        p.create("c2.w", {3, spec.hidden, spec.hidden}) =
            neural::xavier_init({3, spec.hidden, spec.hidden}, init_rng);
        p.create("c2.b", {spec.hidden});
        p.create("head.w", {spec.hidden, 2}) = neural::xavier_init({spec.hidden, 2}, init_rng);
        p.create("head.b", {2});
    }

    neural::AdamState adam;
    adam.lr = spec.learning_rate;
    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
        core::CounterRng shuffle_rng(seed, "baseline-shuffle", epoch);
        shuffle_rng.shuffle(order);
        const std::size_t n_batches = (order.size() + spec.batch_size - 1) / spec.batch_size;
        for (std::size_t bi = 0; bi < n_batches; ++bi) {
            const std::size_t begin = bi * spec.batch_size;
            const std::size_t end = std::min(begin + spec.batch_size, order.size());
            p.zero_grads();
            for (std::size_t s = begin; s < end; ++s) {
                const Tensor& x = inputs[order[s]];
                const Tensor& y = targets[order[s]];
                if (spec.kind == BaselineSpec::Kind::kMlp) {
                    neural::FfnCache cache;
                    const Tensor xf = flatten(x);
                    const Tensor yf = flatten(y);
                    const Tensor pred = neural::ffn_forward(xf, p.param("w1"), p.param("b1"),
                                                            p.param("w2"), p.param("b2"), &cache);
                    const Tensor dpred = neural::mse_loss_grad(pred, yf);
                    neural::ffn_backward(dpred, cache, p.param("w1"), p.param("w2"), p.grad("w1"),
                                         p.grad("b1"), p.grad("w2"), p.grad("b2"));
                } else {
                    neural::Conv1dCache c1, c2;
                    neural::ReluCache r1, r2;
                    neural::LinearCache hc;
                    Tensor h = neural::conv1d_forward(x, p.param("c1.w"), p.param("c1.b"), &c1);
                    h = neural::relu_forward(h, &r1);
                    h = neural::conv1d_forward(h, p.param("c2.w"), p.param("c2.b"), &c2);
                    h = neural::relu_forward(h, &r2);
                    const Tensor pred = neural::linear_forward(h, p.param("head.w"),
                                                               p.param("head.b"), &hc);
                    Tensor d = neural::mse_loss_grad(pred, y);
                    d = neural::linear_backward(d, hc, p.param("head.w"), p.grad("head.w"),
                                                p.grad("head.b"));
                    d = neural::relu_backward(d, r2);
                    d = neural::conv1d_backward(d, c2, p.param("c2.w"), p.grad("c2.w"),
                                                p.grad("c2.b"));
                    d = neural::relu_backward(d, r1);
                    neural::conv1d_backward(d, c1, p.param("c1.w"), p.grad("c1.w"), p.grad("c1.b"));
                }
            }
            const double inv = 1.0 / static_cast<double>(end - begin);
            p.for_each([&](const std::string&, Tensor&, Tensor& g) {
                for (std::size_t i = 0; i < g.size(); ++i) g[i] *= inv;
            });
            neural::adam_step(p, adam);
        }
    }
    return m;
}

std::vector<core::Position2D> BaselineModel::predict_window(const rfsim::DatasetWindow& w,
                                                            const rfsim::DatasetManifest& m) const {
    const Tensor x = recovery::window_tensors(w, m).input;
    if (x.cols() != width_ || x.rows() != window_ticks_) {
        throw std::invalid_argument("BaselineModel::predict_window: window shape mismatch");
    }
    const NormBox box(workspace_);
    const auto& p = params_;
    Tensor pred;
    switch (spec_.kind) {
        case BaselineSpec::Kind::kMlp: {
            const Tensor out = neural::ffn_forward(flatten(x), p.param("w1"), p.param("b1"),
                                                   p.param("w2"), p.param("b2"), nullptr);
            pred = Tensor({window_ticks_, 2}, out.values());
            break;
        }
        case BaselineSpec::Kind::kCnn: {
            Tensor h = neural::conv1d_forward(x, p.param("c1.w"), p.param("c1.b"), nullptr);
            h = neural::relu_forward(h, nullptr);
            h = neural::conv1d_forward(h, p.param("c2.w"), p.param("c2.b"), nullptr);
            h = neural::relu_forward(h, nullptr);
            pred = neural::linear_forward(h, p.param("head.w"), p.param("head.b"), nullptr);
            break;
        }
        case BaselineSpec::Kind::kSvrLinear: {
            pred = add_row_bias(matmul(x, p.param("w")), p.param("b"));
            break;
        }
    }
    std::vector<core::Position2D> out(window_ticks_);
    for (std::size_t t = 0; t < window_ticks_; ++t) {
        out[t] = {box.dx(pred.at(t, 0)), box.dy(pred.at(t, 1))};
    }
    return out;
}

std::vector<core::Trajectory> BaselineModel::predict_trajectories(
    const rfsim::Dataset& dataset) const {
    std::vector<core::Trajectory> out;
    std::size_t current = static_cast<std::size_t>(-1);
    for (const auto& w : dataset.windows) {
        if (out.empty() || w.trajectory_id != current) {
            out.emplace_back();
            current = w.trajectory_id;
        }
        const auto positions = predict_window(w, dataset.manifest);
        for (std::size_t t = 0; t < positions.size(); ++t) {
            out.back().append(w.truth[t].t, positions[t]);
        }
    }
    return out;
}

}  // namespace hopscatter::evalx
