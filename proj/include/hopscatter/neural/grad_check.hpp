#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hopscatter/neural/params.hpp"

namespace hopscatter::neural {

struct GradCheckEntry {
    std::string param;
    std::size_t index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    double rel_error = 0.0;
};

struct GradCheckReport {
    double max_rel_error = 0.0;
    double tolerance = 0.0;
    std::size_t coords_checked = 0;
    std::vector<GradCheckEntry> failures;  // entries above tolerance

    bool ok() const { return failures.empty(); }
};

struct GradCheckOptions {
    double tolerance = 1e-4;
    double step = 1e-5;  // central-difference half step
    /// 0 checks every coordinate; otherwise at most this many per parameter,
    /// sampled deterministically from sample_seed.
    std::size_t max_coords_per_param = 0;
    std::uint64_t sample_seed = 0;
};

/// Central finite differences against the analytic gradient.
///
/// forward() evaluates the scalar loss at the current parameters without
/// touching gradients; forward_backward() zeroes the gradients, runs
/// forward+backward, and leaves the analytic gradient in the store. Both must
/// be pure in everything except the store.
GradCheckReport grad_check(ParamStore& params, const std::function<double()>& forward,
                           const std::function<double()>& forward_backward,
                           const GradCheckOptions& options = {});

}  // namespace hopscatter::neural
