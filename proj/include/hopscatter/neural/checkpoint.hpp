#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hopscatter/neural/params.hpp"

namespace hopscatter::neural {

/// Binary parameter container: 8-byte magic, little-endian u64 header length,
/// JSON header (version, caller metadata, per-tensor name/shape/byte-offset),
/// then all tensor data as little-endian 64-bit reals. Round-trips bit-exactly.
void save_params(const ParamStore& params, const nlohmann::json& meta,
                 const std::filesystem::path& path);

struct LoadedCheckpoint {
    ParamStore params;
    nlohmann::json meta;
};

/// Throws std::runtime_error on a corrupt or truncated file and on version
/// mismatches.
LoadedCheckpoint load_params(const std::filesystem::path& path);

}  // namespace hopscatter::neural
