#pragma once

#include <filesystem>
#include <string>

namespace hopscatter::core {

/// Writes content to a temp file in the target directory, then renames it into
/// place. Readers never observe partial files.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace hopscatter::core
