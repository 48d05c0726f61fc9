#include "gad/ssl/infomax.hpp"

#include <cmath>

#include "gad/errors.hpp"
#include "gad/numeric/activation.hpp"
#include "gad/numeric/rng.hpp"

namespace gad {

DenseMatrix summary(const DenseMatrix& h, std::span<const std::size_t> rows) {
    Tape tape;
    return summary(tape.constant(h), rows).value();
}

Var summary(const Var& h, std::span<const std::size_t> rows) {
    if (rows.empty()) throw ShapeError("summary: empty index set");
    return ad::activate(ad::mean_rows(ad::gather_rows(h, rows)), Activation::sigmoid());
}

double discriminate(std::span<const double> h, std::span<const double> s, const DenseMatrix& weight) {
    if (weight.rows() != h.size() || weight.cols() != s.size()) {
        throw ShapeError("discriminate: weight " + weight.shape_string() + " does not match h (" +
                         std::to_string(h.size()) + ") and s (" + std::to_string(s.size()) + ")");
    }
    double score = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        double ws = 0.0;
        for (std::size_t j = 0; j < s.size(); ++j) ws += weight(i, j) * s[j];
        score += h[i] * ws;
    }
    return sigmoid(score);
}

void init_discriminator(ParameterStore& store, std::size_t dim, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "discriminator"));
    store.add(kDiscriminatorParam, uniform_matrix(dim, dim, 1.0 / std::sqrt(double(dim)), rng));
}

namespace {

// 0.5·(mean BCE of positives against 1 + mean BCE of negatives against 0)
Var contrast(const Var& pos, const Var& neg, const Var& s, const Var& weight) {
    Var ws = ad::matmul(weight, ad::transpose(s));
    const std::vector<double> ones(pos.rows(), 1.0);
    const std::vector<double> zeros(neg.rows(), 0.0);
    return ad::scale(ad::add(ad::binary_cross_entropy_logits(ad::matmul(pos, ws), ones),
                             ad::binary_cross_entropy_logits(ad::matmul(neg, ws), zeros)),
                     0.5);
}

void check_views(const Var& h, const Var& h_corrupt, const Var& weight) {
    if (!h.value().same_shape(h_corrupt.value())) {
        throw ShapeError("infomax loss: views differ in shape (" + h.value().shape_string() + " vs " +
                         h_corrupt.value().shape_string() + ")");
    }
    if (weight.rows() != h.cols() || weight.cols() != h.cols()) {
        throw ShapeError("infomax loss: discriminator " + weight.value().shape_string() + " does not match embedding " +
                         h.value().shape_string());
    }
}

}  // namespace

Var dgi_loss(const Var& h, const Var& h_corrupt, const Var& disc_weight) {
    check_views(h, h_corrupt, disc_weight);
    Var s = ad::activate(ad::mean_rows(h), Activation::sigmoid());
    return contrast(h, h_corrupt, s, disc_weight);
}

Var dci_loss(const Var& h, const Var& h_corrupt, const ClusterState& clusters, const Var& disc_weight) {
    check_views(h, h_corrupt, disc_weight);
    if (clusters.assignments.size() != h.rows()) {
        throw ShapeError("dci_loss: clustering covers " + std::to_string(clusters.assignments.size()) +
                         " nodes, embeddings have " + std::to_string(h.rows()));
    }
    const auto groups = clusters.members();
    Var total;
    for (std::size_t k = 0; k < groups.size(); ++k) {
        if (groups[k].empty()) throw ShapeError("dci_loss: cluster " + std::to_string(k) + " is empty");
        Var pos = ad::gather_rows(h, groups[k]);
        Var neg = ad::gather_rows(h_corrupt, groups[k]);
        Var s = ad::activate(ad::mean_rows(pos), Activation::sigmoid());
        Var term = contrast(pos, neg, s, disc_weight);
        total = k == 0 ? term : ad::add(total, term);
    }
    return ad::scale(total, 1.0 / double(groups.size()));
}

double dgi_loss(const DenseMatrix& h, const DenseMatrix& h_corrupt, const DenseMatrix& disc_weight) {
    Tape tape;
    return dgi_loss(tape.constant(h), tape.constant(h_corrupt), tape.constant(disc_weight)).value()(0, 0);
}

double dci_loss(const DenseMatrix& h, const DenseMatrix& h_corrupt, const ClusterState& clusters,
                const DenseMatrix& disc_weight) {
    Tape tape;
    return dci_loss(tape.constant(h), tape.constant(h_corrupt), clusters, tape.constant(disc_weight)).value()(0, 0);
}

ClusterState maybe_recluster(std::size_t epoch, std::size_t interval, const DenseMatrix& embeddings,
                             const ClusterState& state, std::uint64_t base_seed) {
    if (interval == 0) throw ConfigError("maybe_recluster: interval must be positive");
    if (epoch == 0 || epoch % interval != 0) return state;
    return kmeans(embeddings, state.k, derive_seed(base_seed, "recluster", epoch));
}

}  // namespace gad
