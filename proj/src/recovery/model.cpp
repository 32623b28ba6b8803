#include "hopscatter/recovery/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hopscatter/core/angles.hpp"
#include "hopscatter/neural/checkpoint.hpp"

namespace hopscatter::recovery {

using neural::Tensor;

std::size_t feature_width(std::size_t antenna_count, std::size_t channel_count) {
    return 3 * antenna_count + channel_count;
}

WindowTensors window_tensors(const rfsim::DatasetWindow& w, const rfsim::DatasetManifest& m,
                             bool eavesdropper) {
    const std::size_t n_ant = m.config.antenna_count();
    const std::size_t channels = m.plan.count;
    const std::size_t t_len = m.window_ticks;
    if (w.reads.size() != t_len * n_ant) {
        throw std::invalid_argument("window_tensors: window read count mismatch");
    }

    WindowTensors wt;
    wt.input = Tensor({t_len, feature_width(n_ant, channels)});
    wt.label_phase = Tensor({t_len, 2 * n_ant});
    wt.label_rssi = Tensor({t_len, n_ant});
    wt.tick_times.resize(t_len);

    for (std::size_t t = 0; t < t_len; ++t) {
        wt.tick_times[t] = w.reads[t * n_ant].t;
        for (std::size_t a = 0; a < n_ant; ++a) {
            const rfsim::TagRead& r = w.reads[t * n_ant + a];
            wt.input.at(t, 3 * a + 0) = std::sin(r.phase);
            wt.input.at(t, 3 * a + 1) = std::cos(r.phase);
            wt.input.at(t, 3 * a + 2) = normalize_rssi(r.rssi);
            const double phi_ref = w.label_phase_ref[t * n_ant + a];
            wt.label_phase.at(t, 2 * a + 0) = std::sin(phi_ref);
            wt.label_phase.at(t, 2 * a + 1) = std::cos(phi_ref);
            wt.label_rssi.at(t, a) = normalize_rssi(w.label_rssi_dehopped[t * n_ant + a]);
        }
        if (!eavesdropper) {
            const auto& channel = w.reads[t * n_ant].channel_id;
            if (channel && *channel < channels) {
                wt.input.at(t, 3 * n_ant + *channel) = 1.0;
            }
        }
    }
    return wt;
}

namespace {

std::string blk(std::size_t i, const char* suffix) {
    return "blk" + std::to_string(i) + "." + suffix;
}

}  // namespace

RecoveryModel RecoveryModel::build(const ConformerConfig& config, std::size_t antenna_count,
                                   std::size_t channel_count, core::CounterRng& rng) {
    config.validate();
    if (antenna_count < 2) {
        throw std::invalid_argument("RecoveryModel: at least 2 antennas required");
    }

    RecoveryModel m;
    m.config_ = config;
    m.antenna_count_ = antenna_count;
    m.channel_count_ = channel_count;
    auto& p = m.params_;

    const std::size_t f = feature_width(antenna_count, channel_count);
    const std::size_t d = config.d_model;
    const std::size_t hidden = d * config.cnn_width_multiplier;
    const std::size_t ffn_dim = d * config.ffn_expansion;

    auto init = [&](const std::string& name, std::vector<std::size_t> shape) {
        p.create(name, shape) = neural::xavier_init(shape, rng);
    };
    auto init_norm = [&](const std::string& prefix) {
        p.create(prefix + ".g", {d}).fill(1.0);
        p.create(prefix + ".b", {d});
    };
    auto init_attn = [&](const std::string& prefix) {
        init(prefix + ".wq", {d, d});
        init(prefix + ".wk", {d, d});
        init(prefix + ".wv", {d, d});
        init(prefix + ".wo", {d, d});
        p.create(prefix + ".bo", {d});
    };
    auto init_ffn = [&](const std::string& prefix) {
        init(prefix + ".w1", {d, ffn_dim});
        p.create(prefix + ".b1", {ffn_dim});
        init(prefix + ".w2", {ffn_dim, d});
        p.create(prefix + ".b2", {d});
    };

    if (config.use_cnn_preproc) {
        for (std::size_t i = 0; i < config.n_pre_cnn_layers; ++i) {
            const std::size_t in = i == 0 ? f : hidden;
            const std::size_t out = i + 1 == config.n_pre_cnn_layers ? d : hidden;
            const std::string name = "cnn" + std::to_string(i);
            init(name + ".w", {3, in, out});
            p.create(name + ".b", {out});
        }
    } else {
        init("input_proj.w", {f, d});
        p.create("input_proj.b", {d});
    }

    if (config.use_transformer_preproc) {
        init_norm("tpre.ln1");
        init_attn("tpre.attn");
        init_norm("tpre.ln2");
        init_ffn("tpre.ffn");
    }

    for (std::size_t i = 0; i < config.n_conformer_blocks; ++i) {
        init_norm(blk(i, "ln_attn"));
        init_attn(blk(i, "attn"));
        init_norm(blk(i, "ln_conv"));
        init(blk(i, "conv.k"), {config.conv_kernel, d});
        p.create(blk(i, "conv.b"), {d});
        init_norm(blk(i, "ln_ffn"));
        init_ffn(blk(i, "ffn"));
    }

    init_norm("out_ln");
    init("head_phase.w", {d, 2 * antenna_count});
    p.create("head_phase.b", {2 * antenna_count});
    init("head_rssi.w", {d, antenna_count});
    p.create("head_rssi.b", {antenna_count});

    return m;
}

std::size_t RecoveryModel::input_width() const {
    return feature_width(antenna_count_, channel_count_);
}

RecoveryModel::RawOutput RecoveryModel::forward(const Tensor& input, neural::Mode mode,
                                                core::CounterRng* dropout_rng,
                                                Trace* trace) const {
    if (input.rank() != 2 || input.cols() != input_width()) {
        throw std::invalid_argument("RecoveryModel::forward: input width " +
                                    std::to_string(input.rank() == 2 ? input.cols() : 0) +
                                    " does not match model width " + std::to_string(input_width()));
    }
    if (input.rows() == 0) {
        throw std::invalid_argument("RecoveryModel::forward: zero-length window");
    }
    const auto& p = params_;
    const double rate = config_.dropout;

    Tensor x = input;
    if (config_.use_cnn_preproc) {
        if (trace) {
            trace->cnn.resize(config_.n_pre_cnn_layers);
            trace->cnn_relu.resize(config_.n_pre_cnn_layers);
        }
        for (std::size_t i = 0; i < config_.n_pre_cnn_layers; ++i) {
            const std::string name = "cnn" + std::to_string(i);
            x = neural::conv1d_forward(x, p.param(name + ".w"), p.param(name + ".b"),
                                       trace ? &trace->cnn[i] : nullptr);
            x = neural::relu_forward(x, trace ? &trace->cnn_relu[i] : nullptr);
        }
    } else {
        x = neural::linear_forward(x, p.param("input_proj.w"), p.param("input_proj.b"),
                                   trace ? &trace->input_proj : nullptr);
    }

    x = neural::add_positional_encoding(x);

    if (config_.use_transformer_preproc) {
        Tensor h = neural::layer_norm_forward(x, p.param("tpre.ln1.g"), p.param("tpre.ln1.b"),
                                              trace ? &trace->tpre_ln1 : nullptr);
        h = neural::mhsa_forward(h, p.param("tpre.attn.wq"), p.param("tpre.attn.wk"),
                                 p.param("tpre.attn.wv"), p.param("tpre.attn.wo"),
                                 p.param("tpre.attn.bo"), config_.n_heads,
                                 trace ? &trace->tpre_attn : nullptr);
        h = neural::dropout(h, rate, mode, dropout_rng, trace ? &trace->tpre_drop1 : nullptr);
        x = neural::add(x, h);

        h = neural::layer_norm_forward(x, p.param("tpre.ln2.g"), p.param("tpre.ln2.b"),
                                       trace ? &trace->tpre_ln2 : nullptr);
        h = neural::ffn_forward(h, p.param("tpre.ffn.w1"), p.param("tpre.ffn.b1"),
                                p.param("tpre.ffn.w2"), p.param("tpre.ffn.b2"),
                                trace ? &trace->tpre_ffn : nullptr);
        h = neural::dropout(h, rate, mode, dropout_rng, trace ? &trace->tpre_drop2 : nullptr);
        x = neural::add(x, h);
    }

    if (trace) {
        trace->blocks.resize(config_.n_conformer_blocks);
    }
    for (std::size_t i = 0; i < config_.n_conformer_blocks; ++i) {
        BlockTrace* bt = trace ? &trace->blocks[i] : nullptr;
        Tensor h = neural::layer_norm_forward(x, p.param(blk(i, "ln_attn.g")),
                                              p.param(blk(i, "ln_attn.b")),
                                              bt ? &bt->ln_attn : nullptr);
        h = neural::mhsa_forward(h, p.param(blk(i, "attn.wq")), p.param(blk(i, "attn.wk")),
                                 p.param(blk(i, "attn.wv")), p.param(blk(i, "attn.wo")),
                                 p.param(blk(i, "attn.bo")), config_.n_heads,
                                 bt ? &bt->attn : nullptr);
        h = neural::dropout(h, rate, mode, dropout_rng, bt ? &bt->drop_attn : nullptr);
        x = neural::add(x, h);

        h = neural::layer_norm_forward(x, p.param(blk(i, "ln_conv.g")),
                                       p.param(blk(i, "ln_conv.b")), bt ? &bt->ln_conv : nullptr);
        h = neural::depthwise_conv1d_forward(h, p.param(blk(i, "conv.k")),
                                             p.param(blk(i, "conv.b")), bt ? &bt->conv : nullptr);
        h = neural::dropout(h, rate, mode, dropout_rng, bt ? &bt->drop_conv : nullptr);
        x = neural::add(x, h);

        h = neural::layer_norm_forward(x, p.param(blk(i, "ln_ffn.g")),
                                       p.param(blk(i, "ln_ffn.b")), bt ? &bt->ln_ffn : nullptr);
        h = neural::ffn_forward(h, p.param(blk(i, "ffn.w1")), p.param(blk(i, "ffn.b1")),
                                p.param(blk(i, "ffn.w2")), p.param(blk(i, "ffn.b2")),
                                bt ? &bt->ffn : nullptr);
        h = neural::dropout(h, rate, mode, dropout_rng, bt ? &bt->drop_ffn : nullptr);
        x = neural::add(x, h);
    }

    x = neural::layer_norm_forward(x, p.param("out_ln.g"), p.param("out_ln.b"),
                                   trace ? &trace->out_ln : nullptr);

    RawOutput out;
    out.phase = neural::linear_forward(x, p.param("head_phase.w"), p.param("head_phase.b"),
                                       trace ? &trace->head_phase : nullptr);
    out.rssi = neural::linear_forward(x, p.param("head_rssi.w"), p.param("head_rssi.b"),
                                      trace ? &trace->head_rssi : nullptr);
    return out;
}

void RecoveryModel::backward(const Trace& trace, const Tensor& dphase, const Tensor& drssi) {
    auto& p = params_;

    Tensor dx = neural::linear_backward(dphase, trace.head_phase, p.param("head_phase.w"),
                                        p.grad("head_phase.w"), p.grad("head_phase.b"));
    add_inplace(dx, neural::linear_backward(drssi, trace.head_rssi, p.param("head_rssi.w"),
                                            p.grad("head_rssi.w"), p.grad("head_rssi.b")));
    dx = neural::layer_norm_backward(dx, trace.out_ln, p.param("out_ln.g"), p.grad("out_ln.g"),
                                     p.grad("out_ln.b"));

    for (std::size_t ri = config_.n_conformer_blocks; ri > 0; --ri) {
        const std::size_t i = ri - 1;
        const BlockTrace& bt = trace.blocks[i];

        Tensor dh = neural::dropout_backward(dx, bt.drop_ffn);
        dh = neural::ffn_backward(dh, bt.ffn, p.param(blk(i, "ffn.w1")), p.param(blk(i, "ffn.w2")),
                                  p.grad(blk(i, "ffn.w1")), p.grad(blk(i, "ffn.b1")),
                                  p.grad(blk(i, "ffn.w2")), p.grad(blk(i, "ffn.b2")));
        dh = neural::layer_norm_backward(dh, bt.ln_ffn, p.param(blk(i, "ln_ffn.g")),
                                         p.grad(blk(i, "ln_ffn.g")), p.grad(blk(i, "ln_ffn.b")));
        add_inplace(dx, dh);

        dh = neural::dropout_backward(dx, bt.drop_conv);
        dh = neural::depthwise_conv1d_backward(dh, bt.conv, p.param(blk(i, "conv.k")),
                                               p.grad(blk(i, "conv.k")), p.grad(blk(i, "conv.b")));
        dh = neural::layer_norm_backward(dh, bt.ln_conv, p.param(blk(i, "ln_conv.g")),
                                         p.grad(blk(i, "ln_conv.g")), p.grad(blk(i, "ln_conv.b")));
        add_inplace(dx, dh);

        dh = neural::dropout_backward(dx, bt.drop_attn);
        dh = neural::mhsa_backward(dh, bt.attn, p.param(blk(i, "attn.wq")),
                                   p.param(blk(i, "attn.wk")), p.param(blk(i, "attn.wv")),
                                   p.param(blk(i, "attn.wo")), p.grad(blk(i, "attn.wq")),
                                   p.grad(blk(i, "attn.wk")), p.grad(blk(i, "attn.wv")),
                                   p.grad(blk(i, "attn.wo")), p.grad(blk(i, "attn.bo")));
        dh = neural::layer_norm_backward(dh, bt.ln_attn, p.param(blk(i, "ln_attn.g")),
                                         p.grad(blk(i, "ln_attn.g")), p.grad(blk(i, "ln_attn.b")));
        add_inplace(dx, dh);
    }

    if (config_.use_transformer_preproc) {
        Tensor dh = neural::dropout_backward(dx, trace.tpre_drop2);
        dh = neural::ffn_backward(dh, trace.tpre_ffn, p.param("tpre.ffn.w1"),
                                  p.param("tpre.ffn.w2"), p.grad("tpre.ffn.w1"),
                                  p.grad("tpre.ffn.b1"), p.grad("tpre.ffn.w2"),
                                  p.grad("tpre.ffn.b2"));
        dh = neural::layer_norm_backward(dh, trace.tpre_ln2, p.param("tpre.ln2.g"),
                                         p.grad("tpre.ln2.g"), p.grad("tpre.ln2.b"));
        add_inplace(dx, dh);

        dh = neural::dropout_backward(dx, trace.tpre_drop1);
        dh = neural::mhsa_backward(dh, trace.tpre_attn, p.param("tpre.attn.wq"),
                                   p.param("tpre.attn.wk"), p.param("tpre.attn.wv"),
                                   p.param("tpre.attn.wo"), p.grad("tpre.attn.wq"),
                                   p.grad("tpre.attn.wk"), p.grad("tpre.attn.wv"),
                                   p.grad("tpre.attn.wo"), p.grad("tpre.attn.bo"));
        dh = neural::layer_norm_backward(dh, trace.tpre_ln1, p.param("tpre.ln1.g"),
                                         p.grad("tpre.ln1.g"), p.grad("tpre.ln1.b"));
        add_inplace(dx, dh);
    }

    // positional encoding backward is the identity
    if (config_.use_cnn_preproc) {
        for (std::size_t ri = config_.n_pre_cnn_layers; ri > 0; --ri) {
            const std::size_t i = ri - 1;
            const std::string name = "cnn" + std::to_string(i);
            dx = neural::relu_backward(dx, trace.cnn_relu[i]);
            dx = neural::conv1d_backward(dx, trace.cnn[i], p.param(name + ".w"),
                                         p.grad(name + ".w"), p.grad(name + ".b"));
        }
    } else {
        dx = neural::linear_backward(dx, trace.input_proj, p.param("input_proj.w"),
                                     p.grad("input_proj.w"), p.grad("input_proj.b"));
    }
}

RecoveryModel::Decoded RecoveryModel::predict(const Tensor& input) const {
    const RawOutput out = forward(input, neural::Mode::kEval);
    const std::size_t t_len = input.rows();
    Decoded dec;
    dec.phases.assign(t_len, std::vector<double>(antenna_count_));
    dec.rssi.assign(t_len, std::vector<double>(antenna_count_));
    for (std::size_t t = 0; t < t_len; ++t) {
        for (std::size_t a = 0; a < antenna_count_; ++a) {
            double s = out.phase.at(t, 2 * a);
            double c = out.phase.at(t, 2 * a + 1);
            const double norm = std::hypot(s, c);
            if (norm > 1e-12) {
                s /= norm;
                c /= norm;
            }
            dec.phases[t][a] = core::wrap_phase(std::atan2(s, c));
            dec.rssi[t][a] = denormalize_rssi(out.rssi.at(t, a));
        }
    }
    return dec;
}

std::vector<rfsim::PhaseTick> RecoveryModel::predict_ticks(const WindowTensors& wt,
                                                           double f_ref_hz) const {
    const Decoded dec = predict(wt.input);
    std::vector<rfsim::PhaseTick> ticks(dec.phases.size());
    for (std::size_t t = 0; t < ticks.size(); ++t) {
        ticks[t].t = wt.tick_times[t];
        ticks[t].freq_hz = f_ref_hz;
        ticks[t].phases = dec.phases[t];
    }
    return ticks;
}

RecoveryModel::LossParts RecoveryModel::loss(const RawOutput& out, const Tensor& label_phase,
                                             const Tensor& label_rssi, double lambda_aux) {
    LossParts parts;
    parts.phase_term = neural::mse_loss(out.phase, label_phase);
    parts.aux_term = neural::mse_loss(out.rssi, label_rssi);
    parts.total = parts.phase_term + lambda_aux * parts.aux_term;
    return parts;
}

RecoveryModel::LossParts RecoveryModel::train_step_loss(const WindowTensors& wt, double lambda_aux,
                                                        core::CounterRng* dropout_rng) {
    Trace trace;
    const RawOutput out = forward(wt.input, neural::Mode::kTrain, dropout_rng, &trace);
    const LossParts parts = loss(out, wt.label_phase, wt.label_rssi, lambda_aux);
    const Tensor dphase = neural::mse_loss_grad(out.phase, wt.label_phase);
    const Tensor drssi = neural::scale(neural::mse_loss_grad(out.rssi, wt.label_rssi), lambda_aux);
    backward(trace, dphase, drssi);
    return parts;
}

void RecoveryModel::save(const std::filesystem::path& path) const {
    nlohmann::json meta;
    meta["kind"] = "recovery_model";
    meta["antenna_count"] = antenna_count_;
    meta["channel_count"] = channel_count_;
    meta["config"] = config_.to_json();
    neural::save_params(params_, meta, path);
}

RecoveryModel RecoveryModel::load(const std::filesystem::path& path) {
    neural::LoadedCheckpoint ck = neural::load_params(path);
    if (ck.meta.value("kind", "") != "recovery_model") {
        throw std::runtime_error("RecoveryModel::load: checkpoint is not a recovery model: " +
                                 path.string());
    }
    RecoveryModel m;
    m.antenna_count_ = ck.meta.at("antenna_count").get<std::size_t>();
    m.channel_count_ = ck.meta.at("channel_count").get<std::size_t>();
    m.config_ = ConformerConfig::from_json(ck.meta.at("config"));
    m.params_ = std::move(ck.params);

    // Rebuild the expected layout and compare shapes; a mismatch means the
    // checkpoint was produced for a different geometry or architecture.
    core::CounterRng probe(0, "shape-probe");
    RecoveryModel expected = build(m.config_, m.antenna_count_, m.channel_count_, probe);
    const auto expected_names = expected.params_.names();
    const auto got_names = m.params_.names();
    if (expected_names != got_names) {
        throw std::runtime_error("RecoveryModel::load: parameter set mismatch in " + path.string());
    }
    for (const auto& name : expected_names) {
        if (expected.params_.param(name).shape() != m.params_.param(name).shape()) {
            throw std::runtime_error("RecoveryModel::load: shape mismatch for '" + name + "' in " +
                                     path.string());
        }
    }
    return m;
}

}  // namespace hopscatter::recovery
