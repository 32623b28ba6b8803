#include "hopscatter/neural/layers.hpp"

#include <cmath>
#include <stdexcept>

#include "hopscatter/core/angles.hpp"

namespace hopscatter::neural {

Tensor xavier_init(const std::vector<std::size_t>& shape, core::CounterRng& rng) {
    if (shape.empty()) {
        throw std::invalid_argument("xavier_init: rank must be >= 1");
    }
    std::size_t fan_in = 1, fan_out = 1;
    if (shape.size() == 1) {
        fan_in = fan_out = shape[0];
    } else {
        fan_out = shape.back();
        for (std::size_t i = 0; i + 1 < shape.size(); ++i) {
            fan_in *= shape[i];
        }
    }
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Tensor t(shape);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = rng.uniform(-a, a);
    }
    return t;
}

Tensor softmax_rows(const Tensor& m) {
    if (m.rank() != 2) {
        throw std::invalid_argument("softmax_rows: rank-2 tensor required");
    }
    Tensor out = m;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double mx = m.at(i, 0);
        for (std::size_t j = 1; j < m.cols(); ++j) {
            mx = std::max(mx, m.at(i, j));
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double e = std::exp(m.at(i, j) - mx);
            out.at(i, j) = e;
            sum += e;
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out.at(i, j) /= sum;
        }
    }
    return out;
}

Tensor linear_forward(const Tensor& x, const Tensor& w, const Tensor& b, LinearCache* cache) {
    if (cache) {
        cache->x = x;
    }
    return add_row_bias(matmul(x, w), b);
}

Tensor linear_backward(const Tensor& dy, const LinearCache& cache, const Tensor& w, Tensor& dw,
                       Tensor& db) {
    add_inplace(dw, matmul_transpose_a(cache.x, dy));
    add_inplace(db, column_sums(dy));
    return matmul_transpose_b(dy, w);
}

Tensor relu_forward(const Tensor& x, ReluCache* cache) {
    if (cache) {
        cache->z = x;
    }
    Tensor y = x;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0.0) y[i] = 0.0;
    }
    return y;
}

Tensor relu_backward(const Tensor& dy, const ReluCache& cache) {
    Tensor dx = dy;
    for (std::size_t i = 0; i < dx.size(); ++i) {
        if (cache.z[i] <= 0.0) dx[i] = 0.0;
    }
    return dx;
}

namespace {

Tensor head_slice(const Tensor& fused, std::size_t head, std::size_t dh) {
    Tensor s({fused.rows(), dh});
    for (std::size_t i = 0; i < fused.rows(); ++i) {
        for (std::size_t j = 0; j < dh; ++j) {
            s.at(i, j) = fused.at(i, head * dh + j);
        }
    }
    return s;
}

void head_slice_add(Tensor& fused, const Tensor& s, std::size_t head, std::size_t dh) {
    for (std::size_t i = 0; i < fused.rows(); ++i) {
        for (std::size_t j = 0; j < dh; ++j) {
            fused.at(i, head * dh + j) += s.at(i, j);
        }
    }
}

/// dS for A = softmax(S) given dA: row-wise A .* (dA - rowdot(dA, A)).
Tensor softmax_rows_backward(const Tensor& a, const Tensor& da) {
    Tensor ds = da;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            dot += da.at(i, j) * a.at(i, j);
        }
        for (std::size_t j = 0; j < a.cols(); ++j) {
            ds.at(i, j) = a.at(i, j) * (da.at(i, j) - dot);
        }
    }
    return ds;
}

}  // namespace

Tensor mhsa_forward(const Tensor& x, const Tensor& wq, const Tensor& wk, const Tensor& wv,
                    const Tensor& wo, const Tensor& bo, std::size_t n_heads, MhsaCache* cache) {
    const std::size_t d = x.cols();
    if (n_heads == 0 || d % n_heads != 0) {
        throw std::invalid_argument("mhsa_forward: model width must be divisible by head count");
    }
    const std::size_t dh = d / n_heads;
    const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));

    Tensor q = matmul(x, wq);
    Tensor k = matmul(x, wk);
    Tensor v = matmul(x, wv);

    Tensor concat({x.rows(), d});
    std::vector<Tensor> attn(n_heads);
    for (std::size_t h = 0; h < n_heads; ++h) {
        const Tensor qh = head_slice(q, h, dh);
        const Tensor kh = head_slice(k, h, dh);
        const Tensor vh = head_slice(v, h, dh);
        Tensor scores = scale(matmul_transpose_b(qh, kh), inv_sqrt_dh);
        attn[h] = softmax_rows(scores);
        head_slice_add(concat, matmul(attn[h], vh), h, dh);
    }

    if (cache) {
        cache->x = x;
        cache->q = std::move(q);
        cache->k = std::move(k);
        cache->v = std::move(v);
        cache->attn = std::move(attn);
        cache->concat = concat;
        cache->n_heads = n_heads;
    }
    return add_row_bias(matmul(concat, wo), bo);
}

Tensor mhsa_backward(const Tensor& dy, const MhsaCache& cache, const Tensor& wq, const Tensor& wk,
                     const Tensor& wv, const Tensor& wo, Tensor& dwq, Tensor& dwk, Tensor& dwv,
                     Tensor& dwo, Tensor& dbo) {
    const std::size_t d = cache.x.cols();
    const std::size_t n_heads = cache.n_heads;
    const std::size_t dh = d / n_heads;
    const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));

    add_inplace(dwo, matmul_transpose_a(cache.concat, dy));
    add_inplace(dbo, column_sums(dy));
    const Tensor dconcat = matmul_transpose_b(dy, wo);

    Tensor dq({cache.x.rows(), d});
    Tensor dk({cache.x.rows(), d});
    Tensor dv({cache.x.rows(), d});
    for (std::size_t h = 0; h < n_heads; ++h) {
        const Tensor doh = head_slice(dconcat, h, dh);
        const Tensor qh = head_slice(cache.q, h, dh);
        const Tensor kh = head_slice(cache.k, h, dh);
        const Tensor vh = head_slice(cache.v, h, dh);
        const Tensor& ah = cache.attn[h];

        add_inplace(dv, [&] {
            Tensor dvh_f({cache.x.rows(), d});
            head_slice_add(dvh_f, matmul_transpose_a(ah, doh), h, dh);
            return dvh_f;
        }());
        const Tensor dah = matmul_transpose_b(doh, vh);
        const Tensor ds = scale(softmax_rows_backward(ah, dah), inv_sqrt_dh);
        {
            Tensor dqh_f({cache.x.rows(), d});
            head_slice_add(dqh_f, matmul(ds, kh), h, dh);
            add_inplace(dq, dqh_f);
        }
        {
            Tensor dkh_f({cache.x.rows(), d});
            head_slice_add(dkh_f, matmul_transpose_a(ds, qh), h, dh);
            add_inplace(dk, dkh_f);
        }
    }

    add_inplace(dwq, matmul_transpose_a(cache.x, dq));
    add_inplace(dwk, matmul_transpose_a(cache.x, dk));
    add_inplace(dwv, matmul_transpose_a(cache.x, dv));

    Tensor dx = matmul_transpose_b(dq, wq);
    add_inplace(dx, matmul_transpose_b(dk, wk));
    add_inplace(dx, matmul_transpose_b(dv, wv));
    return dx;
}

Tensor depthwise_conv1d_forward(const Tensor& x, const Tensor& kernels, const Tensor& bias,
                                DwConvCache* cache) {
    if (kernels.rank() != 2) {
        throw std::invalid_argument("depthwise_conv1d: kernels must be (k x d)");
    }
    const std::size_t k = kernels.rows();
    const std::size_t d = x.cols();
    if (k % 2 == 0) {
        throw std::invalid_argument("depthwise_conv1d: kernel length must be odd");
    }
    if (kernels.cols() != d || bias.size() != d) {
        throw std::invalid_argument("depthwise_conv1d: channel count mismatch");
    }
    const std::size_t t_len = x.rows();
    const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(k / 2);

    Tensor z({t_len, d});
    for (std::size_t t = 0; t < t_len; ++t) {
        for (std::size_t c = 0; c < d; ++c) {
            double sum = bias[c];
            for (std::size_t j = 0; j < k; ++j) {
                const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t) +
                                         static_cast<std::ptrdiff_t>(j) - off;
                if (s >= 0 && s < static_cast<std::ptrdiff_t>(t_len)) {
                    sum += x.at(static_cast<std::size_t>(s), c) * kernels.at(j, c);
                }
            }
            z.at(t, c) = sum;
        }
    }
    if (cache) {
        cache->x = x;
        cache->z = z;
    }
    Tensor y = z;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0.0) y[i] = 0.0;
    }
    return y;
}

Tensor depthwise_conv1d_backward(const Tensor& dy, const DwConvCache& cache, const Tensor& kernels,
                                 Tensor& dkernels, Tensor& dbias) {
    const std::size_t k = kernels.rows();
    const std::size_t d = cache.x.cols();
    const std::size_t t_len = cache.x.rows();
    const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(k / 2);

    Tensor dz = dy;
    for (std::size_t i = 0; i < dz.size(); ++i) {
        if (cache.z[i] <= 0.0) dz[i] = 0.0;
    }

    Tensor dx({t_len, d});
    for (std::size_t t = 0; t < t_len; ++t) {
        for (std::size_t c = 0; c < d; ++c) {
            const double g = dz.at(t, c);
            if (g == 0.0) continue;
            dbias[c] += g;
            for (std::size_t j = 0; j < k; ++j) {
                const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t) +
                                         static_cast<std::ptrdiff_t>(j) - off;
                if (s >= 0 && s < static_cast<std::ptrdiff_t>(t_len)) {
                    dkernels.at(j, c) += cache.x.at(static_cast<std::size_t>(s), c) * g;
                    dx.at(static_cast<std::size_t>(s), c) += kernels.at(j, c) * g;
                }
            }
        }
    }
    return dx;
}

Tensor conv1d_forward(const Tensor& x, const Tensor& w, const Tensor& b, Conv1dCache* cache) {
    if (w.rank() != 3) {
        throw std::invalid_argument("conv1d: weights must be (k x in x out)");
    }
    const std::size_t k = w.shape()[0];
    const std::size_t in = w.shape()[1];
    const std::size_t out = w.shape()[2];
    if (k % 2 == 0) {
        throw std::invalid_argument("conv1d: kernel length must be odd");
    }
    if (x.cols() != in || b.size() != out) {
        throw std::invalid_argument("conv1d: channel count mismatch");
    }
    const std::size_t t_len = x.rows();
    const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(k / 2);

    Tensor y({t_len, out});
    for (std::size_t t = 0; t < t_len; ++t) {
        double* yrow = y.data() + t * out;
        for (std::size_t o = 0; o < out; ++o) {
            yrow[o] = b[o];
        }
        for (std::size_t j = 0; j < k; ++j) {
            const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t) +
                                     static_cast<std::ptrdiff_t>(j) - off;
            if (s < 0 || s >= static_cast<std::ptrdiff_t>(t_len)) continue;
            const double* xrow = x.data() + static_cast<std::size_t>(s) * in;
            const double* wslab = w.data() + j * in * out;
            for (std::size_t i = 0; i < in; ++i) {
                const double xv = xrow[i];
                if (xv == 0.0) continue;
                const double* wrow = wslab + i * out;
                for (std::size_t o = 0; o < out; ++o) {
                    yrow[o] += xv * wrow[o];
                }
            }
        }
    }
    if (cache) {
        cache->x = x;
    }
    return y;
}

Tensor conv1d_backward(const Tensor& dy, const Conv1dCache& cache, const Tensor& w, Tensor& dw,
                       Tensor& db) {
    const std::size_t k = w.shape()[0];
    const std::size_t in = w.shape()[1];
    const std::size_t out = w.shape()[2];
    const std::size_t t_len = cache.x.rows();
    const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(k / 2);

    add_inplace(db, column_sums(dy));
    Tensor dx({t_len, in});
    for (std::size_t t = 0; t < t_len; ++t) {
        const double* dyrow = dy.data() + t * out;
        for (std::size_t j = 0; j < k; ++j) {
            const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t) +
                                     static_cast<std::ptrdiff_t>(j) - off;
            if (s < 0 || s >= static_cast<std::ptrdiff_t>(t_len)) continue;
            const double* xrow = cache.x.data() + static_cast<std::size_t>(s) * in;
            double* dxrow = dx.data() + static_cast<std::size_t>(s) * in;
            double* dwslab = dw.data() + j * in * out;
            const double* wslab = w.data() + j * in * out;
            for (std::size_t i = 0; i < in; ++i) {
                double acc = 0.0;
                double* dwrow = dwslab + i * out;
                const double* wrow = wslab + i * out;
                const double xv = xrow[i];
                for (std::size_t o = 0; o < out; ++o) {
                    dwrow[o] += xv * dyrow[o];
                    acc += wrow[o] * dyrow[o];
                }
                dxrow[i] += acc;
            }
        }
    }
    return dx;
}

Tensor ffn_forward(const Tensor& x, const Tensor& w1, const Tensor& b1, const Tensor& w2,
                   const Tensor& b2, FfnCache* cache) {
    Tensor h_pre = add_row_bias(matmul(x, w1), b1);
    Tensor h = h_pre;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] < 0.0) h[i] = 0.0;
    }
    Tensor y = add_row_bias(matmul(h, w2), b2);
    if (cache) {
        cache->x = x;
        cache->h_pre = std::move(h_pre);
        cache->h = std::move(h);
    }
    return y;
}

Tensor ffn_backward(const Tensor& dy, const FfnCache& cache, const Tensor& w1, const Tensor& w2,
                    Tensor& dw1, Tensor& db1, Tensor& dw2, Tensor& db2) {
    add_inplace(dw2, matmul_transpose_a(cache.h, dy));
    add_inplace(db2, column_sums(dy));
    Tensor dh = matmul_transpose_b(dy, w2);
    for (std::size_t i = 0; i < dh.size(); ++i) {
        if (cache.h_pre[i] <= 0.0) dh[i] = 0.0;
    }
    add_inplace(dw1, matmul_transpose_a(cache.x, dh));
    add_inplace(db1, column_sums(dh));
    return matmul_transpose_b(dh, w1);
}

namespace {
constexpr double kLayerNormEps = 1e-5;
}

Tensor layer_norm_forward(const Tensor& x, const Tensor& gain, const Tensor& bias,
                          LayerNormCache* cache) {
    const std::size_t d = x.cols();
    if (d < 2) {
        throw std::invalid_argument("layer_norm: feature dimension must be >= 2");
    }
    Tensor xhat({x.rows(), d});
    std::vector<double> inv_std(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < d; ++j) mean += x.at(i, j);
        mean /= static_cast<double>(d);
        double var = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double c = x.at(i, j) - mean;
            var += c * c;
        }
        var /= static_cast<double>(d);
        const double is = 1.0 / std::sqrt(var + kLayerNormEps);
        inv_std[i] = is;
        for (std::size_t j = 0; j < d; ++j) {
            xhat.at(i, j) = (x.at(i, j) - mean) * is;
        }
    }
    Tensor y({x.rows(), d});
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            y.at(i, j) = xhat.at(i, j) * gain[j] + bias[j];
        }
    }
    if (cache) {
        cache->xhat = std::move(xhat);
        cache->inv_std = std::move(inv_std);
    }
    return y;
}

Tensor layer_norm_backward(const Tensor& dy, const LayerNormCache& cache, const Tensor& gain,
                           Tensor& dgain, Tensor& dbias) {
    const std::size_t rows = dy.rows();
    const std::size_t d = dy.cols();
    Tensor dx({rows, d});
    for (std::size_t i = 0; i < rows; ++i) {
        double mean_dxhat = 0.0;
        double mean_dxhat_xhat = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double dxhat = dy.at(i, j) * gain[j];
            mean_dxhat += dxhat;
            mean_dxhat_xhat += dxhat * cache.xhat.at(i, j);
            dgain[j] += dy.at(i, j) * cache.xhat.at(i, j);
            dbias[j] += dy.at(i, j);
        }
        mean_dxhat /= static_cast<double>(d);
        mean_dxhat_xhat /= static_cast<double>(d);
        for (std::size_t j = 0; j < d; ++j) {
            const double dxhat = dy.at(i, j) * gain[j];
            dx.at(i, j) = (dxhat - mean_dxhat - cache.xhat.at(i, j) * mean_dxhat_xhat) *
                          cache.inv_std[i];
        }
    }
    return dx;
}

Tensor dropout(const Tensor& x, double rate, Mode mode, core::CounterRng* rng,
               DropoutCache* cache) {
    if (rate < 0.0 || rate >= 1.0) {
        throw std::invalid_argument("dropout: rate must be in [0, 1)");
    }
    if (mode == Mode::kEval || rate == 0.0) {
        if (cache) {
            cache->mask = Tensor();
        }
        return x;
    }
    if (!rng) {
        throw std::invalid_argument("dropout: train mode requires an rng stream");
    }
    const double keep_scale = 1.0 / (1.0 - rate);
    Tensor mask(x.shape());
    Tensor y = x;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double m = rng->uniform() < rate ? 0.0 : keep_scale;
        mask[i] = m;
        y[i] *= m;
    }
    if (cache) {
        cache->mask = std::move(mask);
    }
    return y;
}

Tensor dropout_backward(const Tensor& dy, const DropoutCache& cache) {
    if (cache.mask.empty()) {
        return dy;
    }
    return hadamard(dy, cache.mask);
}

Tensor add_positional_encoding(const Tensor& x) {
    const std::size_t d = x.cols();
    Tensor y = x;
    for (std::size_t t = 0; t < x.rows(); ++t) {
        for (std::size_t j = 0; j < d; ++j) {
            const double exponent = static_cast<double>(2 * (j / 2)) / static_cast<double>(d);
            const double angle = static_cast<double>(t) / std::pow(10000.0, exponent);
            y.at(t, j) += (j % 2 == 0) ? std::sin(angle) : std::cos(angle);
        }
    }
    return y;
}

double mse_loss(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target)) {
        throw std::invalid_argument("mse_loss: shape mismatch " + pred.shape_str() + " vs " +
                                    target.shape_str());
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pred.size());
}

Tensor mse_loss_grad(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target)) {
        throw std::invalid_argument("mse_loss_grad: shape mismatch");
    }
    Tensor g = pred;
    const double s = 2.0 / static_cast<double>(pred.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = s * (pred[i] - target[i]);
    }
    return g;
}

}  // namespace hopscatter::neural
