#include "gad/encoders/encoder.hpp"

#include <cmath>

#include "gad/errors.hpp"
#include "gad/numeric/rng.hpp"

namespace gad {

std::string to_string(EncoderKind kind) {
    switch (kind) {
        case EncoderKind::gin: return "gin";
        case EncoderKind::gat: return "gat";
        case EncoderKind::gcn: return "gcn";
        case EncoderKind::multi: return "multi";
    }
    return "unknown";
}

EncoderKind parse_encoder_kind(const std::string& s) {
    if (s == "gin") return EncoderKind::gin;
    if (s == "gat") return EncoderKind::gat;
    if (s == "gcn") return EncoderKind::gcn;
    if (s == "multi") return EncoderKind::multi;
    throw ConfigError("unknown encoder '" + s + "' (expected gin, gat, gcn or multi)");
}

std::string to_string(MergeOp op) {
    switch (op) {
        case MergeOp::mean: return "mean";
        case MergeOp::max: return "max";
        case MergeOp::weighted_mean: return "weighted_mean";
    }
    return "unknown";
}

MergeOp parse_merge_op(const std::string& s) {
    if (s == "mean") return MergeOp::mean;
    if (s == "max") return MergeOp::max;
    if (s == "weighted_mean") return MergeOp::weighted_mean;
    throw ConfigError("unknown merge operator '" + s + "' (expected mean, max or weighted_mean)");
}

void validate(const EncoderConfig& config) {
    std::vector<std::string> problems;
    if (config.input_dim == 0) problems.push_back("input dimension must be positive");
    if (config.embedding_dim == 0) problems.push_back("embedding dimension must be positive");
    if (config.layers == 0) problems.push_back("layer count must be positive");
    if (!(config.gat_slope >= 0.0)) problems.push_back("GAT slope must be non-negative");
    if (config.kind == EncoderKind::multi) {
        if (config.members.empty()) problems.push_back("multi-encoder needs at least one member");
        for (EncoderKind m : config.members)
            if (m == EncoderKind::multi) problems.push_back("multi-encoder members cannot be multi");
        if (config.merge == MergeOp::weighted_mean) {
            if (config.merge_weights.size() != config.members.size()) {
                problems.push_back("weighted_mean needs one weight per member");
            } else {
                double total = 0.0;
                for (double w : config.merge_weights) total += w;
                if (std::abs(total - 1.0) > 1e-9) problems.push_back("merge weights must sum to 1");
            }
        }
    }
    if (!problems.empty()) {
        std::string msg = "invalid encoder config:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ConfigError(msg);
    }
}

namespace {

std::string member_prefix(const std::string& prefix, std::size_t i, EncoderKind kind) {
    return prefix + ".m" + std::to_string(i) + "." + to_string(kind);
}

void init_single(ParameterStore& store, const EncoderConfig& config, EncoderKind kind, Rng& rng,
                 const std::string& prefix) {
    const std::size_t d = config.embedding_dim;
    for (std::size_t k = 0; k < config.layers; ++k) {
        const std::string layer = prefix + ".l" + std::to_string(k);
        const std::size_t in = k == 0 ? config.input_dim : d;
        switch (kind) {
            case EncoderKind::gin:
                store.add(layer + ".w1", glorot_uniform(in, d, rng));
                store.add(layer + ".b1", DenseMatrix(1, d));
                store.add(layer + ".w2", glorot_uniform(d, d, rng));
                store.add(layer + ".b2", DenseMatrix(1, d));
                if (config.learn_gin_eps) store.add(layer + ".eps", DenseMatrix(1, 1, config.gin_eps));
                break;
            case EncoderKind::gat:
                store.add(layer + ".w", glorot_uniform(in, d, rng));
                store.add(layer + ".attn", glorot_uniform(2 * d, 1, rng));
                break;
            case EncoderKind::gcn:
                store.add(layer + ".w", glorot_uniform(in, d, rng));
                break;
            case EncoderKind::multi:
                throw ConfigError("multi-encoder members cannot be multi");
        }
    }
}

Var single_forward(Tape& tape, const SparseAdjacency& adj, const Var& x, const ParameterStore& store,
                   const EncoderConfig& config, EncoderKind kind, const std::string& prefix) {
    switch (kind) {
        case EncoderKind::gin: return gin_forward(tape, adj, x, store, config, prefix);
        case EncoderKind::gat: return gat_forward(tape, adj, x, store, config, prefix);
        case EncoderKind::gcn: return gcn_forward(tape, adj, x, store, config, prefix);
        case EncoderKind::multi: break;
    }
    throw ConfigError("multi-encoder members cannot be multi");
}

}  // namespace

void init_encoder(ParameterStore& store, const EncoderConfig& config, std::uint64_t seed, const std::string& prefix) {
    validate(config);
    if (config.kind != EncoderKind::multi) {
        Rng rng(derive_seed(seed, "encoder." + to_string(config.kind)));
        init_single(store, config, config.kind, rng, prefix);
        return;
    }
    for (std::size_t i = 0; i < config.members.size(); ++i) {
        Rng rng(derive_seed(seed, "encoder." + to_string(config.members[i]), i));
        init_single(store, config, config.members[i], rng, member_prefix(prefix, i, config.members[i]));
    }
}

Var merge_embeddings(std::span<const Var> members, MergeOp op, std::span<const double> weights) {
    if (members.empty()) throw ConfigError("merge_embeddings: no members");
    for (const Var& m : members) {
        if (!m.value().same_shape(members.front().value())) {
            throw ShapeError("merge_embeddings: member shapes differ (" + members.front().value().shape_string() +
                             " vs " + m.value().shape_string() + ")");
        }
    }
    switch (op) {
        case MergeOp::mean: {
            Var acc = members.front();
            for (std::size_t i = 1; i < members.size(); ++i) acc = ad::add(acc, members[i]);
            return members.size() == 1 ? acc : ad::scale(acc, 1.0 / double(members.size()));
        }
        case MergeOp::max: {
            Var acc = members.front();
            for (std::size_t i = 1; i < members.size(); ++i) acc = ad::maximum(acc, members[i]);
            return acc;
        }
        case MergeOp::weighted_mean: {
            if (weights.size() != members.size()) throw ConfigError("merge_embeddings: one weight per member required");
            Var acc = ad::scale(members.front(), weights[0]);
            for (std::size_t i = 1; i < members.size(); ++i) acc = ad::add(acc, ad::scale(members[i], weights[i]));
            return acc;
        }
    }
    throw ConfigError("merge_embeddings: unknown operator");
}

Var encoder_forward(Tape& tape, const SparseAdjacency& adj, const Var& x, const ParameterStore& store,
                    const EncoderConfig& config, const std::string& prefix) {
    if (x.cols() != config.input_dim) {
        throw ShapeError("encoder_forward: features have " + std::to_string(x.cols()) + " columns, encoder expects " +
                         std::to_string(config.input_dim));
    }
    if (x.rows() != adj.num_nodes()) {
        throw ShapeError("encoder_forward: features have " + std::to_string(x.rows()) + " rows, graph has " +
                         std::to_string(adj.num_nodes()) + " nodes");
    }
    if (config.kind != EncoderKind::multi) return single_forward(tape, adj, x, store, config, config.kind, prefix);
    std::vector<Var> outputs;
    outputs.reserve(config.members.size());
    for (std::size_t i = 0; i < config.members.size(); ++i) {
        outputs.push_back(single_forward(tape, adj, x, store, config, config.members[i],
                                         member_prefix(prefix, i, config.members[i])));
    }
    return merge_embeddings(outputs, config.merge, config.merge_weights);
}

DenseMatrix encode(const SparseAdjacency& adj, const DenseMatrix& x, const ParameterStore& store,
                   const EncoderConfig& config, const std::string& prefix) {
    Tape tape;
    return encoder_forward(tape, adj, tape.constant(x), store, config, prefix).value();
}

}  // namespace gad
