#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hopscatter/core/geometry.hpp"

namespace hopscatter::core {

/// Shared system configuration. Every field has a default; a JSON config file
/// may override any subset. Unknown keys are rejected.
struct SystemConfig {
    WorkspaceGrid workspace;
    std::vector<Position2D> antennas = default_antennas();
    double f_ref_hz = 915.25e6;        // reference (de-hopped) frequency
    double phase_noise_sigma = 0.15;   // radians
    double rssi_noise_sigma = 0.5;     // dB
    double kernel_sigma = 0.3;         // sigma of the confidence kernel, radians
    std::uint64_t seed = 1;

    /// Four antennas in a line, 0.14 m apart, 0.1 m below the workspace edge.
    static std::vector<Position2D> default_antennas();

    std::size_t antenna_count() const { return antennas.size(); }

    void validate() const;

    static SystemConfig from_json_text(const std::string& text);
    static SystemConfig from_json_file(const std::filesystem::path& path);
    std::string to_json_text() const;
};

}  // namespace hopscatter::core
