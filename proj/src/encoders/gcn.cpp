#include "gad/encoders/encoder.hpp"

namespace gad {

Var gcn_forward(Tape& tape, const SparseAdjacency& adj, const Var& x, const ParameterStore& store,
                const EncoderConfig& config, const std::string& prefix) {
    Var h = x;
    for (std::size_t k = 0; k < config.layers; ++k) {
        const std::string layer = prefix + ".l" + std::to_string(k);
        Var mean = ad::aggregate(adj, h, AggregateMode::mean, /*include_self=*/true);
        h = ad::activate(ad::matmul(mean, tape.parameter(store, layer + ".w")), Activation::relu());
    }
    return h;
}

}  // namespace gad
