#include "hopscatter/neural/grad_check.hpp"

#include <cmath>

#include "hopscatter/core/rng.hpp"

namespace hopscatter::neural {

GradCheckReport grad_check(ParamStore& params, const std::function<double()>& forward,
                           const std::function<double()>& forward_backward,
                           const GradCheckOptions& options) {
    GradCheckReport report;
    report.tolerance = options.tolerance;

    forward_backward();

    // Snapshot analytic gradients before the finite-difference probes reuse
    // the store.
    std::map<std::string, Tensor> analytic;
    params.for_each([&](const std::string& name, Tensor&, Tensor& grad) {
        analytic.emplace(name, grad);
    });

    core::CounterRng sampler(options.sample_seed, "grad-check-sample");
    for (const std::string& name : params.names()) {
        Tensor& value = params.param(name);
        std::vector<std::size_t> coords;
        if (options.max_coords_per_param == 0 || value.size() <= options.max_coords_per_param) {
            coords.resize(value.size());
            for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
        } else {
            for (std::size_t i = 0; i < options.max_coords_per_param; ++i) {
                coords.push_back(static_cast<std::size_t>(sampler.bounded(value.size())));
            }
        }
        for (std::size_t idx : coords) {
            const double saved = value[idx];
            value[idx] = saved + options.step;
            const double loss_plus = forward();
            value[idx] = saved - options.step;
            const double loss_minus = forward();
            value[idx] = saved;

            const double numeric = (loss_plus - loss_minus) / (2.0 * options.step);
            const double an = analytic.at(name)[idx];
            const double denom = std::max(std::abs(numeric), std::abs(an));
            double rel = 0.0;
            if (denom >= 1e-10) {
                rel = std::abs(numeric - an) / std::max(denom, 1e-8);
            }
            ++report.coords_checked;
            report.max_rel_error = std::max(report.max_rel_error, rel);
            if (rel >= options.tolerance || !std::isfinite(rel)) {
                report.failures.push_back({name, idx, an, numeric, rel});
            }
        }
    }
    return report;
}

}  // namespace hopscatter::neural
