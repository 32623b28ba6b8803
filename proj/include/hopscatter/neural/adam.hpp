#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "hopscatter/neural/params.hpp"
#include "hopscatter/neural/tensor.hpp"

namespace hopscatter::neural {

/// Adam with decoupled weight decay. Defaults follow the training recipe:
/// lr 1e-3, betas 0.9/0.999, eps 1e-8, decay 1e-4.
struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-4;
    std::uint64_t step = 0;
    std::map<std::string, Tensor> m;  // first moments, lazily shaped
    std::map<std::string, Tensor> v;  // second moments
};

/// One bias-corrected update over every parameter in the store, consuming the
/// gradients currently held there. Throws on non-finite gradients, naming the
/// offending parameter.
void adam_step(ParamStore& params, AdamState& state);

}  // namespace hopscatter::neural
