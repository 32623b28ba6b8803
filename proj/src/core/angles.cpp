#include "hopscatter/core/angles.hpp"

#include <cmath>
#include <stdexcept>

namespace hopscatter::core {

double wrap_phase(double theta) {
    if (!std::isfinite(theta)) {
        throw std::domain_error("wrap_phase: non-finite angle");
    }
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    // fmod of a tiny negative can land exactly on 2*pi after the correction
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

double phase_distance(double a, double b) {
    const double d = wrap_phase(a - b);
    return std::min(d, kTwoPi - d);
}

double signed_wrap(double theta) {
    double r = wrap_phase(theta);
    if (r > kPi) {
        r -= kTwoPi;
    }
    return r;
}

}  // namespace hopscatter::core
