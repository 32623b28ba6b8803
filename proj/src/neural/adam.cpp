#include "hopscatter/neural/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace hopscatter::neural {

void adam_step(ParamStore& params, AdamState& state) {
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

    params.for_each([&](const std::string& name, Tensor& value, Tensor& grad) {
        auto mit = state.m.find(name);
        if (mit == state.m.end()) {
            mit = state.m.emplace(name, Tensor::zeros_like(value)).first;
            state.v.emplace(name, Tensor::zeros_like(value));
        }
        Tensor& m = mit->second;
        Tensor& v = state.v.at(name);
        if (!m.same_shape(value)) {
            throw std::invalid_argument("adam_step: moment shape drifted for '" + name + "'");
        }
        for (std::size_t i = 0; i < value.size(); ++i) {
            const double g = grad[i];
            if (!std::isfinite(g)) {
                throw std::runtime_error("adam_step: non-finite gradient in parameter '" + name +
                                         "'");
            }
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            value[i] -= state.lr * (m_hat / (std::sqrt(v_hat) + state.eps) +
                                    state.weight_decay * value[i]);
        }
    });
}

}  // namespace hopscatter::neural
