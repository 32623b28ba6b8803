#pragma once

#include <cstdint>
#include <vector>

#include "hopscatter/core/rng.hpp"
#include "hopscatter/neural/tensor.hpp"

namespace hopscatter::neural {

enum class Mode { kTrain, kEval };

/// Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)). Rank-1 tensors use
/// fan_in = fan_out = n; higher ranks treat the last dimension as fan_out.
Tensor xavier_init(const std::vector<std::size_t>& shape, core::CounterRng& rng);

/// Row-wise softmax with max subtraction.
Tensor softmax_rows(const Tensor& m);

// ---- linear: y = x W + b ----
struct LinearCache {
    Tensor x;
};
Tensor linear_forward(const Tensor& x, const Tensor& w, const Tensor& b, LinearCache* cache);
/// Returns dx; accumulates into dw, db.
Tensor linear_backward(const Tensor& dy, const LinearCache& cache, const Tensor& w, Tensor& dw,
                       Tensor& db);

// ---- relu ----
struct ReluCache {
    Tensor z;
};
Tensor relu_forward(const Tensor& x, ReluCache* cache);
Tensor relu_backward(const Tensor& dy, const ReluCache& cache);

// ---- multi-head self-attention ----
// Per head: softmax((xWq)(xWk)^T / sqrt(d_head)) (xWv); heads concatenated and
// projected by Wo with bias bo.
struct MhsaCache {
    Tensor x, q, k, v;
    std::vector<Tensor> attn;  // one (T x T) per head
    Tensor concat;
    std::size_t n_heads = 1;
};
Tensor mhsa_forward(const Tensor& x, const Tensor& wq, const Tensor& wk, const Tensor& wv,
                    const Tensor& wo, const Tensor& bo, std::size_t n_heads, MhsaCache* cache);
Tensor mhsa_backward(const Tensor& dy, const MhsaCache& cache, const Tensor& wq, const Tensor& wk,
                     const Tensor& wv, const Tensor& wo, Tensor& dwq, Tensor& dwk, Tensor& dwv,
                     Tensor& dwo, Tensor& dbo);

// ---- depthwise 1-D convolution + ReLU ----
// kernels is (k x d), odd k, same-length zero padding; each channel is
// convolved independently, bias added, ReLU applied.
struct DwConvCache {
    Tensor x, z;
};
Tensor depthwise_conv1d_forward(const Tensor& x, const Tensor& kernels, const Tensor& bias,
                                DwConvCache* cache);
Tensor depthwise_conv1d_backward(const Tensor& dy, const DwConvCache& cache, const Tensor& kernels,
                                 Tensor& dkernels, Tensor& dbias);

// ---- full 1-D convolution (linear; activation applied separately) ----
// w is (k x in x out), odd k, same-length zero padding.
struct Conv1dCache {
    Tensor x;
};
Tensor conv1d_forward(const Tensor& x, const Tensor& w, const Tensor& b, Conv1dCache* cache);
Tensor conv1d_backward(const Tensor& dy, const Conv1dCache& cache, const Tensor& w, Tensor& dw,
                       Tensor& db);

// ---- feed-forward: max(0, x W1 + b1) W2 + b2 ----
struct FfnCache {
    Tensor x, h_pre, h;
};
Tensor ffn_forward(const Tensor& x, const Tensor& w1, const Tensor& b1, const Tensor& w2,
                   const Tensor& b2, FfnCache* cache);
Tensor ffn_backward(const Tensor& dy, const FfnCache& cache, const Tensor& w1, const Tensor& w2,
                    Tensor& dw1, Tensor& db1, Tensor& dw2, Tensor& db2);

// ---- layer norm (per row, eps 1e-5) ----
struct LayerNormCache {
    Tensor xhat;
    std::vector<double> inv_std;
};
Tensor layer_norm_forward(const Tensor& x, const Tensor& gain, const Tensor& bias,
                          LayerNormCache* cache);
Tensor layer_norm_backward(const Tensor& dy, const LayerNormCache& cache, const Tensor& gain,
                           Tensor& dgain, Tensor& dbias);

// ---- dropout ----
struct DropoutCache {
    Tensor mask;  // already scaled by 1/(1-rate); empty in eval mode
};
Tensor dropout(const Tensor& x, double rate, Mode mode, core::CounterRng* rng,
               DropoutCache* cache = nullptr);
Tensor dropout_backward(const Tensor& dy, const DropoutCache& cache);

/// Adds the standard sinusoidal position encoding to each row. Backward is the
/// identity.
Tensor add_positional_encoding(const Tensor& x);

// ---- mean squared error ----
double mse_loss(const Tensor& pred, const Tensor& target);
Tensor mse_loss_grad(const Tensor& pred, const Tensor& target);

}  // namespace hopscatter::neural
