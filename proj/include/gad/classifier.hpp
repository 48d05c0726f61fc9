#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gad/numeric/params.hpp"
#include "gad/numeric/tape.hpp"

namespace gad {

inline const std::string kClassifierWeight = "cls.w";
inline const std::string kClassifierBias = "cls.b";

/// Linear scorer p = σ(Wᵀh + b): weight dim×1 uniform in ±1/√dim, bias 0.
void init_classifier(ParameterStore& store, std::size_t dim, std::uint64_t seed);

/// Anomaly probabilities for the given users, in the order given. Throws
/// std::out_of_range if an id is not a user (>= num_users).
Var predict_scores(const Var& embeddings, std::span<const std::size_t> user_ids, std::size_t num_users,
                   const Var& weight, const Var& bias);
std::vector<double> predict_scores(const DenseMatrix& embeddings, std::span<const std::size_t> user_ids,
                                   std::size_t num_users, const DenseMatrix& weight, double bias);

/// Wᵀh + b for the given users; predict_scores is σ of this.
Var predict_logits(const Var& embeddings, std::span<const std::size_t> user_ids, std::size_t num_users,
                   const Var& weight, const Var& bias);

/// −(1/N) Σ [y log p + (1−y) log(1−p)], logs clamped. Throws on an empty label set.
/// class_weights, when non-empty, holds {weight for y=0, weight for y=1}.
Var ce_loss(const Var& probs, std::span<const int> labels, std::span<const double> class_weights = {});
double ce_loss(std::span<const double> probs, std::span<const int> labels);
/// ce_loss of σ(logits), evaluated in log space; used for training.
Var ce_loss_logits(const Var& logits, std::span<const int> labels, std::span<const double> class_weights = {});

/// Inverse-frequency weights {w0, w1} with w0·n0 = w1·n1 = N/2.
std::vector<double> balanced_class_weights(std::span<const int> labels);

}  // namespace gad
