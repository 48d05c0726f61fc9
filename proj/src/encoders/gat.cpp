#include "gad/encoders/encoder.hpp"

namespace gad {

Var gat_forward(Tape& tape, const SparseAdjacency& adj, const Var& x, const ParameterStore& store,
                const EncoderConfig& config, const std::string& prefix) {
    Var h = x;
    for (std::size_t k = 0; k < config.layers; ++k) {
        const std::string layer = prefix + ".l" + std::to_string(k);
        Var z = ad::matmul(h, tape.parameter(store, layer + ".w"));
        h = ad::attention_aggregate(adj, z, tape.parameter(store, layer + ".attn"), config.gat_slope);
        if (k + 1 < config.layers) h = ad::activate(h, Activation::relu());
    }
    return h;
}

}  // namespace gad
