#include "gad/encoders/encoder.hpp"

namespace gad {

Var gin_forward(Tape& tape, const SparseAdjacency& adj, const Var& x, const ParameterStore& store,
                const EncoderConfig& config, const std::string& prefix) {
    Var h = x;
    for (std::size_t k = 0; k < config.layers; ++k) {
        const std::string layer = prefix + ".l" + std::to_string(k);
        Var neighbors = ad::aggregate(adj, h, AggregateMode::sum);
        Var self = h;
        if (config.learn_gin_eps) {
            self = ad::add(h, ad::scale_by(h, tape.parameter(store, layer + ".eps")));
        } else if (config.gin_eps != 0.0) {
            self = ad::scale(h, 1.0 + config.gin_eps);
        }
        Var z = ad::add(self, neighbors);
        Var hidden = ad::activate(
            ad::add_row(ad::matmul(z, tape.parameter(store, layer + ".w1")), tape.parameter(store, layer + ".b1")),
            Activation::relu());
        h = ad::add_row(ad::matmul(hidden, tape.parameter(store, layer + ".w2")), tape.parameter(store, layer + ".b2"));
        if (k + 1 < config.layers) h = ad::activate(h, Activation::relu());
    }
    return h;
}

}  // namespace gad
