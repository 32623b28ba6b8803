#pragma once

#include <span>
#include <string>
#include <vector>

#include "hopscatter/core/geometry.hpp"

namespace hopscatter::evalx {

struct MetricsRecord {
    double mae = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

/// Per-sample absolute errors between a predicted and true path: radial R plus
/// the per-axis |dx|, |dy| series for the directional CDFs.
struct ErrorSeries {
    std::vector<double> r;
    std::vector<double> dx;
    std::vector<double> dy;

    void append(const ErrorSeries& other);
};

/// Requires equal lengths and timestamps matching within half a tick.
ErrorSeries euclid_errors(const core::Trajectory& pred, const core::Trajectory& truth);

double mae(std::span<const double> series);
double rmse(std::span<const double> series);

/// R^2 pooled over both coordinates: 1 - SS_res / SS_tot. Throws on constant
/// truth (undefined variance).
double r2(std::span<const core::Trajectory> preds, std::span<const core::Trajectory> truths);
double r2(const core::Trajectory& pred, const core::Trajectory& truth);

MetricsRecord metrics(const core::Trajectory& pred, const core::Trajectory& truth);
MetricsRecord pooled_metrics(std::span<const core::Trajectory> preds,
                             std::span<const core::Trajectory> truths);

double median(std::vector<double> series);

/// Empirical CDF at the sorted unique values, right-continuous.
struct CdfCurve {
    std::vector<double> thresholds;
    std::vector<double> fractions;

    double fraction_at(double x) const;
    std::string to_csv() const;
};

CdfCurve cdf(std::span<const double> series);

}  // namespace hopscatter::evalx
