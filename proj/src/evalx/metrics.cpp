#include "hopscatter/evalx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hopscatter::evalx {

void ErrorSeries::append(const ErrorSeries& other) {
    r.insert(r.end(), other.r.begin(), other.r.end());
    dx.insert(dx.end(), other.dx.begin(), other.dx.end());
    dy.insert(dy.end(), other.dy.begin(), other.dy.end());
}

ErrorSeries euclid_errors(const core::Trajectory& pred, const core::Trajectory& truth) {
    if (pred.size() != truth.size()) {
        throw std::invalid_argument("euclid_errors: length mismatch (" +
                                    std::to_string(pred.size()) + " vs " +
                                    std::to_string(truth.size()) + ")");
    }
    double tick = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < truth.size(); ++i) {
        tick = std::min(tick, truth[i].t - truth[i - 1].t);
    }
    const double tol = std::isfinite(tick) ? 0.5 * tick : 1e-9;

    ErrorSeries es;
    es.r.reserve(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (std::abs(pred[i].t - truth[i].t) > tol) {
            throw std::invalid_argument("euclid_errors: timestamp mismatch at sample " +
                                        std::to_string(i));
        }
        const double ex = pred[i].p.x - truth[i].p.x;
        const double ey = pred[i].p.y - truth[i].p.y;
        es.dx.push_back(std::abs(ex));
        es.dy.push_back(std::abs(ey));
        es.r.push_back(std::hypot(ex, ey));
    }
    return es;
}

double mae(std::span<const double> series) {
    if (series.empty()) {
        throw std::invalid_argument("mae: empty series");
    }
    double sum = 0.0;
    for (double v : series) sum += std::abs(v);
    return sum / static_cast<double>(series.size());
}

double rmse(std::span<const double> series) {
    if (series.empty()) {
        throw std::invalid_argument("rmse: empty series");
    }
    double sum = 0.0;
    for (double v : series) sum += v * v;
    return std::sqrt(sum / static_cast<double>(series.size()));
}

double r2(std::span<const core::Trajectory> preds, std::span<const core::Trajectory> truths) {
    if (preds.size() != truths.size() || preds.empty()) {
        throw std::invalid_argument("r2: mismatched or empty trajectory sets");
    }
    double mean_x = 0.0, mean_y = 0.0;
    std::size_t n = 0;
    for (const auto& truth : truths) {
        for (const auto& s : truth.samples()) {
            mean_x += s.p.x;
            mean_y += s.p.y;
            ++n;
        }
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t k = 0; k < preds.size(); ++k) {
        const auto& pred = preds[k];
        const auto& truth = truths[k];
        if (pred.size() != truth.size()) {
            throw std::invalid_argument("r2: trajectory length mismatch");
        }
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const double ex = pred[i].p.x - truth[i].p.x;
            const double ey = pred[i].p.y - truth[i].p.y;
            ss_res += ex * ex + ey * ey;
            const double cx = truth[i].p.x - mean_x;
            const double cy = truth[i].p.y - mean_y;
            ss_tot += cx * cx + cy * cy;
        }
    }
    if (ss_tot <= 0.0) {
        throw std::invalid_argument("r2: truth variance is zero (constant truth)");
    }
    return 1.0 - ss_res / ss_tot;
}

double r2(const core::Trajectory& pred, const core::Trajectory& truth) {
    return r2(std::span(&pred, 1), std::span(&truth, 1));
}

MetricsRecord metrics(const core::Trajectory& pred, const core::Trajectory& truth) {
    return pooled_metrics(std::span(&pred, 1), std::span(&truth, 1));
}

MetricsRecord pooled_metrics(std::span<const core::Trajectory> preds,
                             std::span<const core::Trajectory> truths) {
    ErrorSeries all;
    for (std::size_t k = 0; k < preds.size(); ++k) {
        all.append(euclid_errors(preds[k], truths[k]));
    }
    MetricsRecord rec;
    rec.mae = mae(all.r);
    rec.rmse = rmse(all.r);
    rec.r2 = r2(preds, truths);
    rec.n = all.r.size();
    return rec;
}

double median(std::vector<double> series) {
    if (series.empty()) {
        throw std::invalid_argument("median: empty series");
    }
    std::sort(series.begin(), series.end());
    const std::size_t n = series.size();
    return n % 2 == 1 ? series[n / 2] : 0.5 * (series[n / 2 - 1] + series[n / 2]);
}

double CdfCurve::fraction_at(double x) const {
    const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), x);
    if (it == thresholds.begin()) {
        return 0.0;
    }
    return fractions[static_cast<std::size_t>(it - thresholds.begin()) - 1];
}

std::string CdfCurve::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "threshold,fraction\n";
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        os << thresholds[i] << ',' << fractions[i] << '\n';
    }
    return os.str();
}

CdfCurve cdf(std::span<const double> series) {
    if (series.empty()) {
        throw std::invalid_argument("cdf: empty series");
    }
    std::vector<double> sorted(series.begin(), series.end());
    std::sort(sorted.begin(), sorted.end());
    CdfCurve curve;
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) {
            continue;  // keep only the last (cumulative) entry per unique value
        }
        curve.thresholds.push_back(sorted[i]);
        curve.fractions.push_back(static_cast<double>(i + 1) / n);
    }
    return curve;
}

}  // namespace hopscatter::evalx
