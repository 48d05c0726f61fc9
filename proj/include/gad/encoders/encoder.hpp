#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gad/numeric/params.hpp"
#include "gad/numeric/sparse.hpp"
#include "gad/numeric/tape.hpp"

namespace gad {

enum class EncoderKind { gin, gat, gcn, multi };
enum class MergeOp { mean, max, weighted_mean };

std::string to_string(EncoderKind kind);
EncoderKind parse_encoder_kind(const std::string& s);
std::string to_string(MergeOp op);
MergeOp parse_merge_op(const std::string& s);

/// Shape and hyperparameters of a node encoder. Every layer maps to embedding_dim.
struct EncoderConfig {
    EncoderKind kind = EncoderKind::gin;
    std::size_t input_dim = 64;
    std::size_t embedding_dim = 128;
    std::size_t layers = 2;
    double gin_eps = 0.0;
    bool learn_gin_eps = false;
    double gat_slope = 0.2;
    /// Used when kind == multi. Members must not themselves be multi.
    std::vector<EncoderKind> members{EncoderKind::gin, EncoderKind::gat};
    MergeOp merge = MergeOp::mean;
    /// One weight per member, summing to 1; only read for weighted_mean.
    std::vector<double> merge_weights;
};

/// Throws ConfigError listing every problem found.
void validate(const EncoderConfig& config);

/// Creates the encoder's parameters under prefix. Layout:
///   gin: <p>.l<k>.w1 (in×d), .b1 (1×d), .w2 (d×d), .b2 (1×d), .eps (1×1, only if learnable)
///   gat: <p>.l<k>.w (in×d), .attn (2d×1)
///   gcn: <p>.l<k>.w (in×d)
///   multi: member i under <p>.m<i>.<kind>
void init_encoder(ParameterStore& store, const EncoderConfig& config, std::uint64_t seed,
                  const std::string& prefix = "enc");

/// GIN: h_v ← MLP((1+ε)·h_v + Σ_{u∈N(v)} h_u); the MLP is linear-ReLU-linear.
/// ReLU between layers, none after the last. Graph-level readout is not computed.
Var gin_forward(Tape& tape, const SparseAdjacency& adj, const Var& x, const ParameterStore& store,
                const EncoderConfig& config, const std::string& prefix);

/// Single-head GAT with self-attention included. ReLU between layers, none after the last.
Var gat_forward(Tape& tape, const SparseAdjacency& adj, const Var& x, const ParameterStore& store,
                const EncoderConfig& config, const std::string& prefix);

/// GCN: h_v ← ReLU(MEAN{h_u : u ∈ N(v) ∪ {v}} · W) on every layer.
Var gcn_forward(Tape& tape, const SparseAdjacency& adj, const Var& x, const ParameterStore& store,
                const EncoderConfig& config, const std::string& prefix);

/// Combines member embeddings elementwise. Gradients flow to every member.
Var merge_embeddings(std::span<const Var> members, MergeOp op, std::span<const double> weights = {});

/// Dispatches on config.kind; for multi, runs every member and merges the final embeddings.
Var encoder_forward(Tape& tape, const SparseAdjacency& adj, const Var& x, const ParameterStore& store,
                    const EncoderConfig& config, const std::string& prefix = "enc");

/// Forward pass without keeping the tape.
DenseMatrix encode(const SparseAdjacency& adj, const DenseMatrix& x, const ParameterStore& store,
                   const EncoderConfig& config, const std::string& prefix = "enc");

}  // namespace gad
