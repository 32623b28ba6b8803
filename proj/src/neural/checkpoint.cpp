#include "hopscatter/neural/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

#include "hopscatter/core/io.hpp"

namespace hopscatter::neural {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'H', 'S', 'C', 'K', 'P', 'T', '1', '\n'};
constexpr int kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

void append_u64(std::string& out, std::uint64_t v) {
    char buf[8];
    std::memcpy(buf, &v, 8);
    out.append(buf, 8);
}

}  // namespace

void save_params(const ParamStore& params, const json& meta, const std::filesystem::path& path) {
    json header;
    header["version"] = kFormatVersion;
    header["meta"] = meta;
    json tensors = json::array();
    std::size_t offset = 0;
    params.for_each([&](const std::string& name, const Tensor& value, const Tensor&) {
        tensors.push_back({{"name", name}, {"shape", value.shape()}, {"offset", offset}});
        offset += value.size() * sizeof(double);
    });
    header["params"] = std::move(tensors);
    const std::string header_text = header.dump();

    std::string out;
    out.reserve(16 + header_text.size() + offset);
    out.append(kMagic, sizeof(kMagic));
    append_u64(out, header_text.size());
    out.append(header_text);
    params.for_each([&](const std::string&, const Tensor& value, const Tensor&) {
        const char* bytes = reinterpret_cast<const char*>(value.data());
        out.append(bytes, value.size() * sizeof(double));
    });
    core::atomic_write_file(path, out);
}

LoadedCheckpoint load_params(const std::filesystem::path& path) {
    const std::string raw = core::read_file(path);
    if (raw.size() < 16 || std::memcmp(raw.data(), kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("checkpoint: corrupt header (bad magic) in " + path.string());
    }
    std::uint64_t header_len = 0;
    std::memcpy(&header_len, raw.data() + 8, 8);
    if (16 + header_len > raw.size()) {
        throw std::runtime_error("checkpoint: truncated header in " + path.string());
    }
    json header;
    try {
        header = json::parse(raw.substr(16, header_len));
    } catch (const json::parse_error&) {
        throw std::runtime_error("checkpoint: corrupt header JSON in " + path.string());
    }
    if (header.value("version", -1) != kFormatVersion) {
        throw std::runtime_error("checkpoint: unsupported format version in " + path.string());
    }

    const std::size_t data_start = 16 + header_len;
    const std::size_t data_len = raw.size() - data_start;

    LoadedCheckpoint loaded;
    loaded.meta = header.value("meta", json::object());
    for (const auto& entry : header.at("params")) {
        const std::string name = entry.at("name").get<std::string>();
        const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
        const std::size_t offset = entry.at("offset").get<std::size_t>();
        Tensor& t = loaded.params.create(name, shape);
        const std::size_t bytes = t.size() * sizeof(double);
        if (offset + bytes > data_len) {
            throw std::runtime_error("checkpoint: truncated tensor data for '" + name + "' in " +
                                     path.string());
        }
        std::memcpy(t.data(), raw.data() + data_start + offset, bytes);
    }
    return loaded;
}

}  // namespace hopscatter::neural
