#include "hopscatter/core/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hopscatter::core {

using nlohmann::json;

std::vector<Position2D> SystemConfig::default_antennas() {
    // 3 x 0.14 m aperture centered on the default 1 m workspace.
    return {{0.29, -0.10}, {0.43, -0.10}, {0.57, -0.10}, {0.71, -0.10}};
}

void SystemConfig::validate() const {
    workspace.validate();
    if (antennas.size() < 2) {
        throw std::invalid_argument("SystemConfig: at least 2 antennas required");
    }
    if (!(f_ref_hz > 0.0)) {
        throw std::invalid_argument("SystemConfig: f_ref must be positive");
    }
    if (phase_noise_sigma < 0.0 || rssi_noise_sigma < 0.0 || kernel_sigma < 0.0) {
        throw std::invalid_argument("SystemConfig: noise sigmas must be non-negative");
    }
}

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known, const std::string& scope) {
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) {
            throw std::invalid_argument("SystemConfig: unknown key '" + scope + key + "'");
        }
    }
}

WorkspaceGrid parse_workspace(const json& j) {
    reject_unknown_keys(j, {"x_min", "x_max", "y_min", "y_max", "resolution"}, "workspace.");
    WorkspaceGrid g;
    if (j.contains("x_min")) g.x_min = j.at("x_min").get<double>();
    if (j.contains("x_max")) g.x_max = j.at("x_max").get<double>();
    if (j.contains("y_min")) g.y_min = j.at("y_min").get<double>();
    if (j.contains("y_max")) g.y_max = j.at("y_max").get<double>();
    if (j.contains("resolution")) g.resolution = j.at("resolution").get<double>();
    return g;
}

}  // namespace

SystemConfig SystemConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("SystemConfig: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("SystemConfig: top-level JSON must be an object");
    }
    reject_unknown_keys(j,
                        {"workspace", "antennas", "f_ref_hz", "phase_noise_sigma",
                         "rssi_noise_sigma", "kernel_sigma", "seed"},
                        "");

    SystemConfig cfg;
    if (j.contains("workspace")) {
        cfg.workspace = parse_workspace(j.at("workspace"));
    }
    if (j.contains("antennas")) {
        cfg.antennas.clear();
        for (const auto& a : j.at("antennas")) {
            if (!a.is_array() || a.size() != 2) {
                throw std::invalid_argument("SystemConfig: antennas must be [x, y] pairs");
            }
            cfg.antennas.push_back({a[0].get<double>(), a[1].get<double>()});
        }
    }
    if (j.contains("f_ref_hz")) cfg.f_ref_hz = j.at("f_ref_hz").get<double>();
    if (j.contains("phase_noise_sigma")) cfg.phase_noise_sigma = j.at("phase_noise_sigma").get<double>();
    if (j.contains("rssi_noise_sigma")) cfg.rssi_noise_sigma = j.at("rssi_noise_sigma").get<double>();
    if (j.contains("kernel_sigma")) cfg.kernel_sigma = j.at("kernel_sigma").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();

    cfg.validate();
    return cfg;
}

SystemConfig SystemConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("SystemConfig: cannot open config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string SystemConfig::to_json_text() const {
    json j;
    j["workspace"] = {{"x_min", workspace.x_min}, {"x_max", workspace.x_max},
                      {"y_min", workspace.y_min}, {"y_max", workspace.y_max},
                      {"resolution", workspace.resolution}};
    json ants = json::array();
    for (const auto& a : antennas) {
        ants.push_back({a.x, a.y});
    }
    j["antennas"] = ants;
    j["f_ref_hz"] = f_ref_hz;
    j["phase_noise_sigma"] = phase_noise_sigma;
    j["rssi_noise_sigma"] = rssi_noise_sigma;
    j["kernel_sigma"] = kernel_sigma;
    j["seed"] = seed;
    return j.dump(2);
}

}  // namespace hopscatter::core
