#include "hopscatter/core/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace hopscatter::core {

double distance(const Position2D& a, const Position2D& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

Trajectory::Trajectory(std::vector<Sample> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) {
        throw std::invalid_argument("Trajectory: empty sample list");
    }
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (!(samples_[i].t > samples_[i - 1].t)) {
            throw std::invalid_argument("Trajectory: timestamps must be strictly increasing");
        }
    }
}

void Trajectory::append(double t, Position2D p) {
    if (!samples_.empty() && !(t > samples_.back().t)) {
        throw std::invalid_argument("Trajectory::append: timestamp not increasing");
    }
    samples_.push_back({t, p});
}

Position2D Trajectory::at(double t) const {
    if (samples_.empty()) {
        throw std::logic_error("Trajectory::at: empty trajectory");
    }
    if (t <= samples_.front().t) {
        return samples_.front().p;
    }
    if (t >= samples_.back().t) {
        return samples_.back().p;
    }
    std::size_t lo = 0;
    std::size_t hi = samples_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (samples_[mid].t <= t) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const auto& a = samples_[lo];
    const auto& b = samples_[hi];
    const double w = (t - a.t) / (b.t - a.t);
    return {a.p.x + w * (b.p.x - a.p.x), a.p.y + w * (b.p.y - a.p.y)};
}

double Trajectory::duration() const {
    return samples_.empty() ? 0.0 : samples_.back().t - samples_.front().t;
}

void WorkspaceGrid::validate() const {
    if (!(resolution > 0.0)) {
        throw std::invalid_argument("WorkspaceGrid: resolution must be positive");
    }
    if (!(x_max > x_min) || !(y_max > y_min)) {
        throw std::invalid_argument("WorkspaceGrid: max must exceed min on both axes");
    }
}

namespace {
std::size_t axis_nodes(double lo, double hi, double res) {
    // Tolerance keeps exact multiples from spilling into an extra node.
    return static_cast<std::size_t>(std::ceil((hi - lo) / res - 1e-9)) + 1;
}
}  // namespace

std::size_t WorkspaceGrid::nx() const {
    validate();
    return axis_nodes(x_min, x_max, resolution);
}

std::size_t WorkspaceGrid::ny() const {
    validate();
    return axis_nodes(y_min, y_max, resolution);
}

Position2D WorkspaceGrid::node(std::size_t ix, std::size_t iy) const {
    return {x_min + static_cast<double>(ix) * resolution,
            y_min + static_cast<double>(iy) * resolution};
}

}  // namespace hopscatter::core
