#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gad/numeric/matrix.hpp"
#include "gad/numeric/params.hpp"
#include "gad/numeric/tape.hpp"
#include "gad/ssl/kmeans.hpp"

namespace gad {

/// Negative view: the feature rows shuffled, adjacency untouched.
struct CorruptedView {
    DenseMatrix x;
    std::vector<std::size_t> permutation;  ///< row i of x is row permutation[i] of the source
    std::uint64_t seed = 0;
};

/// Uniform random row permutation, never the identity when n >= 2. Deterministic in seed.
CorruptedView corrupt(const DenseMatrix& x, std::uint64_t seed);

/// s = σ(mean of the rows of h listed in rows). Throws on an empty index set.
DenseMatrix summary(const DenseMatrix& h, std::span<const std::size_t> rows);
Var summary(const Var& h, std::span<const std::size_t> rows);

/// σ(hᵀ W s) for row vectors h and s.
double discriminate(std::span<const double> h, std::span<const double> s, const DenseMatrix& weight);

inline const std::string kDiscriminatorParam = "disc.w";

/// Bilinear discriminator weight, uniform in ±1/√dim.
void init_discriminator(ParameterStore& store, std::size_t dim, std::uint64_t seed);

/// −(1/2n) Σ_i [log D(h_i, s) + log(1 − D(h̃_i, s))] with s the summary of all rows of h.
Var dgi_loss(const Var& h, const Var& h_corrupt, const Var& disc_weight);
/// Mean over clusters of the DGI-style loss restricted to each cluster, with the
/// cluster's own summary and the same node indices taken from the corrupted view.
Var dci_loss(const Var& h, const Var& h_corrupt, const ClusterState& clusters, const Var& disc_weight);

double dgi_loss(const DenseMatrix& h, const DenseMatrix& h_corrupt, const DenseMatrix& disc_weight);
double dci_loss(const DenseMatrix& h, const DenseMatrix& h_corrupt, const ClusterState& clusters,
                const DenseMatrix& disc_weight);

/// Recomputes the clustering from embeddings when epoch > 0 and epoch is a multiple
/// of interval, using seed derive_seed(base_seed, "recluster", epoch). Otherwise returns state.
ClusterState maybe_recluster(std::size_t epoch, std::size_t interval, const DenseMatrix& embeddings,
                             const ClusterState& state, std::uint64_t base_seed);

}  // namespace gad
