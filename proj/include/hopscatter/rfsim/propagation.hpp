#pragma once

#include <optional>
#include <string>

#include "hopscatter/core/geometry.hpp"

namespace hopscatter::rfsim {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Scenario difficulty preset. dataset1/dataset2 stand in for the two
/// measurement campaigns the evaluation compares against.
struct ScenarioPreset {
    std::string name = "dataset1";
    double phase_noise_sigma = 0.15;  // radians
    double rssi_noise_sigma = 0.5;    // dB
    struct Reflector {
        core::Position2D position;
        double attenuation = 0.3;  // amplitude factor in (0, 1]
    };
    std::optional<Reflector> reflector;

    void validate() const;

    static ScenarioPreset dataset1();
    static ScenarioPreset dataset2();
    static ScenarioPreset by_name(const std::string& name);
};

/// Round-trip backscatter phase wrap(4*pi*f*d/c) for a tag at p seen from an
/// antenna, both ways over the same path.
double theoretical_phase(const core::Position2D& p, const core::Position2D& antenna, double f_hz);

/// Log-distance RSSI with an optional coherent second path via the preset's
/// reflector. Reference power -40 dBm at 0.1 m, path-loss exponent 2.
/// Throws std::domain_error when the tag sits on the antenna (d <= 1 mm).
double rssi_model(const core::Position2D& p, const core::Position2D& antenna, double f_hz,
                  const ScenarioPreset& preset);

inline constexpr double kRssiRefDbm = -40.0;
inline constexpr double kRssiRefDistance = 0.1;  // m
inline constexpr double kRssiPathLossExp = 2.0;

}  // namespace hopscatter::rfsim
