#pragma once

namespace hopscatter::core {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.1415926535897932384626433832795;

/// Wraps an angle into [0, 2*pi). Throws std::domain_error on non-finite input.
double wrap_phase(double theta);

/// Shortest angular distance between two angles, in [0, pi].
double phase_distance(double a, double b);

/// Wraps an angle into (-pi, pi]. Odd around zero except at the branch point pi.
double signed_wrap(double theta);

}  // namespace hopscatter::core
