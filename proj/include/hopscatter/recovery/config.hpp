#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hopscatter::recovery {

/// Architecture knobs for the de-hopping network. The defaults are the
/// smallest stack on which every ablation variant is expressible.
struct ConformerConfig {
    std::size_t d_model = 32;
    std::size_t n_heads = 4;
    std::size_t n_conformer_blocks = 1;
    std::size_t n_pre_cnn_layers = 2;
    std::size_t cnn_width_multiplier = 2;
    std::size_t conv_kernel = 7;
    std::size_t ffn_expansion = 4;
    double dropout = 0.1;
    bool use_cnn_preproc = true;
    bool use_transformer_preproc = true;

    void validate() const;

    nlohmann::json to_json() const;
    static ConformerConfig from_json(const nlohmann::json& j);
};

/// The ablation grid: "ours" plus the eight single-factor variants
/// (cnn depth one/three, cnn width one/four, conformer depth zero/two,
/// preprocessing without CNN / without Transformer).
std::vector<std::pair<std::string, ConformerConfig>> ablation_configs();

}  // namespace hopscatter::recovery
