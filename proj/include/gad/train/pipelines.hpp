#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gad/graph/bipartite.hpp"
#include "gad/graph/dataset.hpp"
#include "gad/graph/folds.hpp"
#include "gad/numeric/params.hpp"
#include "gad/numeric/tape.hpp"
#include "gad/ssl/kmeans.hpp"
#include "gad/train/config.hpp"

namespace gad {

struct FoldResult {
    std::size_t fold = 0;
    /// Test AUC at the selected iteration (the maximum over iterations under best_test).
    double best_auc = 0.0;
    std::size_t best_iteration = 0;
    double seconds = 0.0;
    std::size_t iterations_run = 0;
    std::vector<double> test_auc_history;
    std::vector<double> train_loss_history;
    /// Only set under the validation protocol: validation AUC at the selected iteration.
    std::optional<double> validation_auc;
    /// Test users, their labels and their scores at the selected iteration.
    std::vector<NodeId> test_users;
    std::vector<int> test_labels;
    std::vector<double> test_scores;
};

struct PretrainResult {
    /// Encoder parameters only (prefix "enc"); the discriminator is dropped.
    ParameterStore params;
    /// Self-supervised loss of each epoch, evaluated before that epoch's update.
    std::vector<double> loss_history;
    /// Final clustering (DCI only; k == 0 for DGI).
    ClusterState clusters;
    double seconds = 0.0;
};

/// One evaluation of the self-supervised objective (DGI or DCI per config.ssl) with the
/// encoder under "enc" and the discriminator under kDiscriminatorParam.
Var ssl_objective(Tape& tape, const SparseAdjacency& adj, const DenseMatrix& x, const DenseMatrix& x_corrupt,
                  const ParameterStore& params, const TrainingConfig& config, const ClusterState& clusters);

struct ClassificationPass {
    Var embeddings;
    Var loss;
};

/// Encoder forward plus cross-entropy of the linear head on the given users.
ClassificationPass classification_objective(Tape& tape, const SparseAdjacency& adj, const DenseMatrix& x,
                                            std::size_t num_users, const ParameterStore& params,
                                            const TrainingConfig& config, std::span<const std::size_t> users,
                                            std::span<const int> labels, std::span<const double> class_weights = {});

/// Self-supervised pretraining. Takes no labels by design.
PretrainResult pretrain_ssl(const BipartiteGraph& graph, const DenseMatrix& features, const TrainingConfig& config);

/// Encoder and classifier trained together on the cross-entropy loss.
FoldResult joint_train(const Dataset& dataset, const TrainingConfig& config, const Fold& fold, std::size_t fold_index);

/// Classifier on top of a pretrained encoder; the encoder keeps being tuned.
FoldResult finetune_classify(const Dataset& dataset, const ParameterStore& pretrained, const TrainingConfig& config,
                             const Fold& fold, std::size_t fold_index);

}  // namespace gad
