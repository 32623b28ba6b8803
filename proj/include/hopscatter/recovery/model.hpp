#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hopscatter/core/rng.hpp"
#include "hopscatter/neural/layers.hpp"
#include "hopscatter/neural/params.hpp"
#include "hopscatter/recovery/config.hpp"
#include "hopscatter/rfsim/dataset.hpp"

namespace hopscatter::recovery {

// RSSI values are fed to the network and supervised in a normalized scale.
inline constexpr double kRssiCenter = -50.0;  // dBm
inline constexpr double kRssiScale = 20.0;    // dB

inline double normalize_rssi(double dbm) { return (dbm - kRssiCenter) / kRssiScale; }
inline double denormalize_rssi(double v) { return v * kRssiScale + kRssiCenter; }

/// Per-window tensors: input is (T x feature_width) with, per tick, the
/// per-antenna (sin, cos, rssi) triples followed by the slot's channel
/// one-hot; labels are the de-hopped targets.
struct WindowTensors {
    neural::Tensor input;        // T x (3N + C)
    neural::Tensor label_phase;  // T x 2N, (sin, cos) per antenna at f_ref
    neural::Tensor label_rssi;   // T x N, normalized de-hopped rssi
    std::vector<double> tick_times;
};

/// The eavesdropper variant zeroes the channel one-hot block (no schedule).
WindowTensors window_tensors(const rfsim::DatasetWindow& w, const rfsim::DatasetManifest& m,
                             bool eavesdropper = false);

std::size_t feature_width(std::size_t antenna_count, std::size_t channel_count);

/// Conformer-style de-hopping network with a phase head (sin/cos pairs) and
/// an auxiliary RSSI head.
class RecoveryModel {
public:
    /// Layer stack: [CNN preproc]* -> positional encoding ->
    /// [transformer preproc] -> [conformer block]* -> final norm -> two heads.
    /// Parameters are Xavier-initialized in a fixed order from rng.
    static RecoveryModel build(const ConformerConfig& config, std::size_t antenna_count,
                               std::size_t channel_count, core::CounterRng& rng);

    struct RawOutput {
        neural::Tensor phase;  // T x 2N
        neural::Tensor rssi;   // T x N
    };

    struct BlockTrace {
        neural::LayerNormCache ln_attn;
        neural::MhsaCache attn;
        neural::DropoutCache drop_attn;
        neural::LayerNormCache ln_conv;
        neural::DwConvCache conv;
        neural::DropoutCache drop_conv;
        neural::LayerNormCache ln_ffn;
        neural::FfnCache ffn;
        neural::DropoutCache drop_ffn;
    };

    struct Trace {
        std::vector<neural::Conv1dCache> cnn;
        std::vector<neural::ReluCache> cnn_relu;
        neural::LinearCache input_proj;
        neural::LayerNormCache tpre_ln1;
        neural::MhsaCache tpre_attn;
        neural::DropoutCache tpre_drop1;
        neural::LayerNormCache tpre_ln2;
        neural::FfnCache tpre_ffn;
        neural::DropoutCache tpre_drop2;
        std::vector<BlockTrace> blocks;
        neural::LayerNormCache out_ln;
        neural::LinearCache head_phase;
        neural::LinearCache head_rssi;
    };

    /// Forward pass. In train mode, dropout draws come from dropout_rng.
    RawOutput forward(const neural::Tensor& input, neural::Mode mode,
                      core::CounterRng* dropout_rng = nullptr, Trace* trace = nullptr) const;

    /// Accumulates parameter gradients from the head gradients.
    void backward(const Trace& trace, const neural::Tensor& dphase, const neural::Tensor& drssi);

    struct Decoded {
        std::vector<std::vector<double>> phases;  // [tick][antenna], wrapped at f_ref
        std::vector<std::vector<double>> rssi;    // [tick][antenna], dBm
    };

    /// Eval-mode forward plus decoding: (sin, cos) pairs are normalized to
    /// unit length, converted to wrapped angles; rssi is denormalized.
    Decoded predict(const neural::Tensor& input) const;

    std::vector<rfsim::PhaseTick> predict_ticks(const WindowTensors& wt, double f_ref_hz) const;

    struct LossParts {
        double total = 0.0;
        double phase_term = 0.0;
        double aux_term = 0.0;
    };
    static LossParts loss(const RawOutput& out, const neural::Tensor& label_phase,
                          const neural::Tensor& label_rssi, double lambda_aux);

    /// Train-mode forward, combined loss, and gradient accumulation.
    LossParts train_step_loss(const WindowTensors& wt, double lambda_aux,
                              core::CounterRng* dropout_rng);

    neural::ParamStore& params() { return params_; }
    const neural::ParamStore& params() const { return params_; }
    const ConformerConfig& config() const { return config_; }
    std::size_t antenna_count() const { return antenna_count_; }
    std::size_t channel_count() const { return channel_count_; }
    std::size_t input_width() const;

    void save(const std::filesystem::path& path) const;
    static RecoveryModel load(const std::filesystem::path& path);

private:
    RecoveryModel() = default;

    ConformerConfig config_;
    std::size_t antenna_count_ = 0;
    std::size_t channel_count_ = 0;
    neural::ParamStore params_;
};

}  // namespace hopscatter::recovery
