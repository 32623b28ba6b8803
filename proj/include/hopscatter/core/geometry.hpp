#pragma once

#include <cstddef>
#include <vector>

namespace hopscatter::core {

struct Position2D {
    double x = 0.0;  // meters
    double y = 0.0;  // meters
};

double distance(const Position2D& a, const Position2D& b);

/// Timestamped 2-D path. Timestamps are strictly increasing.
class Trajectory {
public:
    struct Sample {
        double t = 0.0;  // seconds
        Position2D p;
    };

    Trajectory() = default;
    explicit Trajectory(std::vector<Sample> samples);

    const std::vector<Sample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    const Sample& front() const { return samples_.front(); }
    const Sample& back() const { return samples_.back(); }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }

    void append(double t, Position2D p);

    /// Linear interpolation; clamps outside the time span.
    Position2D at(double t) const;

    double duration() const;

private:
    std::vector<Sample> samples_;
};

/// Rectangular candidate grid for the initial-position search.
struct WorkspaceGrid {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
    double resolution = 0.005;  // meters

    void validate() const;

    std::size_t nx() const;
    std::size_t ny() const;
    std::size_t node_count() const { return nx() * ny(); }

    /// Node (ix, iy) -> position. Nodes are ordered x-major: index = ix * ny + iy.
    Position2D node(std::size_t ix, std::size_t iy) const;
};

}  // namespace hopscatter::core
