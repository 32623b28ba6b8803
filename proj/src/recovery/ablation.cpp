#include <stdexcept>

#include "hopscatter/recovery/config.hpp"

namespace hopscatter::recovery {

using nlohmann::json;

void ConformerConfig::validate() const {
    if (d_model == 0 || n_heads == 0 || d_model % n_heads != 0) {
        throw std::invalid_argument("ConformerConfig: d_model must be a positive multiple of n_heads");
    }
    if (conv_kernel % 2 == 0 || conv_kernel == 0) {
        throw std::invalid_argument("ConformerConfig: conv kernel must be odd");
    }
    if (ffn_expansion == 0) {
        throw std::invalid_argument("ConformerConfig: ffn expansion must be >= 1");
    }
    if (use_cnn_preproc && (n_pre_cnn_layers == 0 || cnn_width_multiplier == 0)) {
        throw std::invalid_argument("ConformerConfig: CNN preproc needs depth and width >= 1");
    }
    if (dropout < 0.0 || dropout >= 1.0) {
        throw std::invalid_argument("ConformerConfig: dropout must be in [0, 1)");
    }
}

json ConformerConfig::to_json() const {
    return {{"d_model", d_model},
            {"n_heads", n_heads},
            {"n_conformer_blocks", n_conformer_blocks},
            {"n_pre_cnn_layers", n_pre_cnn_layers},
            {"cnn_width_multiplier", cnn_width_multiplier},
            {"conv_kernel", conv_kernel},
            {"ffn_expansion", ffn_expansion},
            {"dropout", dropout},
            {"use_cnn_preproc", use_cnn_preproc},
            {"use_transformer_preproc", use_transformer_preproc}};
}

ConformerConfig ConformerConfig::from_json(const json& j) {
    ConformerConfig c;
    c.d_model = j.at("d_model").get<std::size_t>();
    c.n_heads = j.at("n_heads").get<std::size_t>();
    c.n_conformer_blocks = j.at("n_conformer_blocks").get<std::size_t>();
    c.n_pre_cnn_layers = j.at("n_pre_cnn_layers").get<std::size_t>();
    c.cnn_width_multiplier = j.at("cnn_width_multiplier").get<std::size_t>();
    c.conv_kernel = j.at("conv_kernel").get<std::size_t>();
    c.ffn_expansion = j.at("ffn_expansion").get<std::size_t>();
    c.dropout = j.at("dropout").get<double>();
    c.use_cnn_preproc = j.at("use_cnn_preproc").get<bool>();
    c.use_transformer_preproc = j.at("use_transformer_preproc").get<bool>();
    c.validate();
    return c;
}

std::vector<std::pair<std::string, ConformerConfig>> ablation_configs() {
    const ConformerConfig ours;
    std::vector<std::pair<std::string, ConformerConfig>> out;
    out.emplace_back("ours", ours);

    ConformerConfig c = ours;
    c.n_pre_cnn_layers = 1;
    out.emplace_back("cnn_layers_one", c);
    c = ours;
    c.n_pre_cnn_layers = 3;
    out.emplace_back("cnn_layers_three", c);

    c = ours;
    c.cnn_width_multiplier = 1;
    out.emplace_back("cnn_width_one", c);
    c = ours;
    c.cnn_width_multiplier = 4;
    out.emplace_back("cnn_width_four", c);

    c = ours;
    c.n_conformer_blocks = 0;
    out.emplace_back("transformer_layers_zero", c);
    c = ours;
    c.n_conformer_blocks = 2;
    out.emplace_back("transformer_layers_two", c);

    c = ours;
    c.use_cnn_preproc = false;
    out.emplace_back("no_cnn", c);
    c = ours;
    c.use_transformer_preproc = false;
    out.emplace_back("no_transformer", c);

    return out;
}

}  // namespace hopscatter::recovery
