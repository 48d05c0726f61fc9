#include <cmath>
#include <stdexcept>

#include "gad/classifier.hpp"
#include "gad/errors.hpp"
#include "gad/numeric/rng.hpp"

namespace gad {

void init_classifier(ParameterStore& store, std::size_t dim, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "classifier"));
    store.add(kClassifierWeight, uniform_matrix(dim, 1, 1.0 / std::sqrt(double(dim)), rng));
    store.add(kClassifierBias, DenseMatrix(1, 1));
}

namespace {

void check_users(std::span<const std::size_t> user_ids, std::size_t num_users) {
    for (std::size_t id : user_ids) {
        if (id >= num_users) {
            throw std::out_of_range("predict_scores: node " + std::to_string(id) + " is an object, not a user (U=" +
                                    std::to_string(num_users) + ")");
        }
    }
}

}  // namespace

Var predict_logits(const Var& embeddings, std::span<const std::size_t> user_ids, std::size_t num_users,
                   const Var& weight, const Var& bias) {
    check_users(user_ids, num_users);
    Var h = ad::gather_rows(embeddings, user_ids);
    return ad::add_row(ad::matmul(h, weight), bias);
}

Var predict_scores(const Var& embeddings, std::span<const std::size_t> user_ids, std::size_t num_users,
                   const Var& weight, const Var& bias) {
    return ad::activate(predict_logits(embeddings, user_ids, num_users, weight, bias), Activation::sigmoid());
}

std::vector<double> predict_scores(const DenseMatrix& embeddings, std::span<const std::size_t> user_ids,
                                   std::size_t num_users, const DenseMatrix& weight, double bias) {
    Tape tape;
    Var p = predict_scores(tape.constant(embeddings), user_ids, num_users, tape.constant(weight),
                           tape.constant(DenseMatrix(1, 1, bias)));
    auto v = p.value().values();
    return {v.begin(), v.end()};
}

namespace {

struct Targets {
    std::vector<double> targets;
    std::vector<double> weights;
};

Targets targets_for(std::size_t count, std::span<const int> labels, std::span<const double> class_weights) {
    if (labels.empty()) throw DataError("ce_loss: empty label set");
    if (count != labels.size()) throw ShapeError("ce_loss: prediction and label counts differ");
    Targets t;
    t.targets.resize(labels.size());
    if (!class_weights.empty()) {
        if (class_weights.size() != 2) throw ConfigError("ce_loss: class weights must be {w0, w1}");
        t.weights.resize(labels.size());
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) throw DataError("ce_loss: label must be 0 or 1");
        t.targets[i] = double(labels[i]);
        if (!t.weights.empty()) t.weights[i] = class_weights[std::size_t(labels[i])];
    }
    return t;
}

}  // namespace

Var ce_loss(const Var& probs, std::span<const int> labels, std::span<const double> class_weights) {
    const Targets t = targets_for(probs.value().size(), labels, class_weights);
    return ad::binary_cross_entropy(probs, t.targets, t.weights);
}

Var ce_loss_logits(const Var& logits, std::span<const int> labels, std::span<const double> class_weights) {
    const Targets t = targets_for(logits.value().size(), labels, class_weights);
    return ad::binary_cross_entropy_logits(logits, t.targets, t.weights);
}

double ce_loss(std::span<const double> probs, std::span<const int> labels) {
    Tape tape;
    DenseMatrix p(probs.size(), 1, std::vector<double>(probs.begin(), probs.end()));
    return ce_loss(tape.constant(std::move(p)), labels).value()(0, 0);
}

std::vector<double> balanced_class_weights(std::span<const int> labels) {
    double counts[2] = {0.0, 0.0};
    for (int y : labels) counts[y == 1 ? 1 : 0] += 1.0;
    if (counts[0] == 0.0 || counts[1] == 0.0) throw DataError("balanced_class_weights: both classes required");
    const double n = counts[0] + counts[1];
    return {n / (2.0 * counts[0]), n / (2.0 * counts[1])};
}

}  // namespace gad
