#include "hopscatter/rfsim/propagation.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "hopscatter/core/angles.hpp"

namespace hopscatter::rfsim {

void ScenarioPreset::validate() const {
    if (phase_noise_sigma < 0.0 || rssi_noise_sigma < 0.0) {
        throw std::invalid_argument("ScenarioPreset: noise sigmas must be non-negative");
    }
    if (reflector) {
        if (!(reflector->attenuation > 0.0) || reflector->attenuation > 1.0) {
            throw std::invalid_argument("ScenarioPreset: reflector attenuation must be in (0, 1]");
        }
    }
}

ScenarioPreset ScenarioPreset::dataset1() {
    ScenarioPreset p;
    p.name = "dataset1";
    p.phase_noise_sigma = 0.15;
    p.rssi_noise_sigma = 0.5;
    return p;
}

ScenarioPreset ScenarioPreset::dataset2() {
    ScenarioPreset p;
    p.name = "dataset2";
    p.phase_noise_sigma = 0.10;
    p.rssi_noise_sigma = 0.5;
    p.reflector = Reflector{{0.5, 0.5}, 0.3};
    return p;
}

ScenarioPreset ScenarioPreset::by_name(const std::string& name) {
    if (name == "dataset1") return dataset1();
    if (name == "dataset2") return dataset2();
    throw std::invalid_argument("ScenarioPreset: unknown preset '" + name + "'");
}

double theoretical_phase(const core::Position2D& p, const core::Position2D& antenna, double f_hz) {
    if (!(f_hz > 0.0)) {
        throw std::invalid_argument("theoretical_phase: frequency must be positive");
    }
    const double d = core::distance(p, antenna);
    return core::wrap_phase(4.0 * core::kPi * f_hz * d / kSpeedOfLight);
}

namespace {

double path_amplitude(double d) {
    const double power_dbm = kRssiRefDbm - 10.0 * kRssiPathLossExp * std::log10(d / kRssiRefDistance);
    return std::pow(10.0, power_dbm / 20.0);
}

}  // namespace

double rssi_model(const core::Position2D& p, const core::Position2D& antenna, double f_hz,
                  const ScenarioPreset& preset) {
    const double d = core::distance(p, antenna);
    if (d <= 1e-3) {
        throw std::domain_error("rssi_model: tag coincident with antenna");
    }
    const double k = 4.0 * core::kPi * f_hz / kSpeedOfLight;  // round-trip rad/m
    std::complex<double> field = std::polar(path_amplitude(d), -k * d);
    if (preset.reflector) {
        const double dr = core::distance(p, preset.reflector->position) +
                          core::distance(preset.reflector->position, antenna);
        field += std::polar(preset.reflector->attenuation * path_amplitude(dr), -k * dr);
    }
    return 20.0 * std::log10(std::abs(field));
}

}  // namespace hopscatter::rfsim
