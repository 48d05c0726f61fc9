#include "gad/train/pipelines.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "gad/classifier.hpp"
#include "gad/encoders/encoder.hpp"
#include "gad/errors.hpp"
#include "gad/metrics.hpp"
#include "gad/numeric/rng.hpp"
#include "gad/numeric/tape.hpp"
#include "gad/ssl/infomax.hpp"

namespace gad {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_features(const DenseMatrix& x, std::size_t nodes, const TrainingConfig& config) {
    if (x.rows() != nodes) {
        throw ShapeError("features have " + std::to_string(x.rows()) + " rows but the graph has " +
                         std::to_string(nodes) + " nodes");
    }
    if (x.cols() != config.feature_dim) {
        throw ConfigError("feature-dim is " + std::to_string(config.feature_dim) + " but the dataset features have " +
                          std::to_string(x.cols()) + " columns");
    }
}

struct LabeledUsers {
    std::vector<std::size_t> ids;
    std::vector<int> labels;
};

LabeledUsers labeled(const LabelSet& labels, const std::vector<NodeId>& users) {
    LabeledUsers out;
    for (NodeId u : users) {
        auto y = labels.label_of(u);
        if (!y) throw DataError("user " + std::to_string(u) + " has no label");
        out.ids.push_back(u);
        out.labels.push_back(*y);
    }
    return out;
}

bool both_classes(const std::vector<int>& labels) {
    bool pos = false, neg = false;
    for (int y : labels) (y == 1 ? pos : neg) = true;
    return pos && neg;
}

// Shared classification loop. params holds the encoder (under "enc") and the classifier.
FoldResult classify(const Dataset& data, ParameterStore params, const TrainingConfig& config, const Fold& fold,
                    std::size_t fold_index) {
    const auto start = Clock::now();
    const std::size_t num_users = data.graph.num_users();
    const SparseAdjacency& adj = data.graph.adjacency();

    std::vector<NodeId> fit_users = fold.train;
    std::optional<LabeledUsers> validation;
    if (config.protocol == SelectionProtocol::validation) {
        HoldoutSplit split = stratified_holdout(data.labels, fold.train, config.validation_fraction,
                                                derive_seed(config.seed, "validation", fold_index));
        fit_users = split.fit;
        validation = labeled(data.labels, split.holdout);
        if (!both_classes(validation->labels)) {
            throw DataError("fold " + std::to_string(fold_index) + ": validation split lacks one class");
        }
    }
    const LabeledUsers train = labeled(data.labels, fit_users);
    const LabeledUsers test = labeled(data.labels, fold.test);
    if (!both_classes(train.labels)) {
        throw DataError("fold " + std::to_string(fold_index) + ": training users contain a single class");
    }
    if (!both_classes(test.labels)) {
        throw DataError("fold " + std::to_string(fold_index) + ": test users contain a single class");
    }
    const std::vector<double> class_weights =
        config.class_weighting ? balanced_class_weights(train.labels) : std::vector<double>{};

    FoldResult result;
    result.fold = fold_index;
    result.test_users = fold.test;
    result.test_labels = test.labels;
    double best_select = -1.0;
    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t stale = 0;

    for (std::size_t it = 0; it < config.classify_iterations; ++it) {
        Tape tape;
        const ClassificationPass pass = classification_objective(tape, adj, data.features.x, num_users, params, config,
                                                                 train.ids, train.labels, class_weights);
        const Var& loss = pass.loss;
        const double loss_value = loss.value()(0, 0);
        if (!std::isfinite(loss_value)) {
            throw NumericalError("fold " + std::to_string(fold_index) + ": non-finite training loss at iteration " +
                                 std::to_string(it));
        }

        const DenseMatrix& hv = pass.embeddings.value();
        const DenseMatrix& wv = params.get(kClassifierWeight);
        const double bv = params.get(kClassifierBias)(0, 0);
        std::vector<double> test_scores = predict_scores(hv, test.ids, num_users, wv, bv);
        const double test_auc = auc(test_scores, test.labels);
        result.test_auc_history.push_back(test_auc);
        result.train_loss_history.push_back(loss_value);
        result.iterations_run = it + 1;

        double select = test_auc;
        if (validation) select = auc(predict_scores(hv, validation->ids, num_users, wv, bv), validation->labels);
        if (select > best_select) {
            best_select = select;
            result.best_iteration = it;
            result.best_auc = test_auc;
            result.test_scores = std::move(test_scores);
            if (validation) result.validation_auc = select;
        }

        if (config.early_stopping_patience) {
            if (loss_value < best_loss) {
                best_loss = loss_value;
                stale = 0;
            } else if (++stale >= *config.early_stopping_patience) {
                break;
            }
        }

        params.adam_step(tape.backward(loss), config.adam);
    }
    result.seconds = seconds_since(start);
    return result;
}

}  // namespace

Var ssl_objective(Tape& tape, const SparseAdjacency& adj, const DenseMatrix& x, const DenseMatrix& x_corrupt,
                  const ParameterStore& params, const TrainingConfig& config, const ClusterState& clusters) {
    const EncoderConfig enc = encoder_config(config);
    Var h = encoder_forward(tape, adj, tape.constant(x), params, enc, "enc");
    Var h_neg = encoder_forward(tape, adj, tape.constant(x_corrupt), params, enc, "enc");
    Var w = tape.parameter(params, kDiscriminatorParam);
    return config.ssl == SslObjective::dci ? dci_loss(h, h_neg, clusters, w) : dgi_loss(h, h_neg, w);
}

ClassificationPass classification_objective(Tape& tape, const SparseAdjacency& adj, const DenseMatrix& x,
                                            std::size_t num_users, const ParameterStore& params,
                                            const TrainingConfig& config, std::span<const std::size_t> users,
                                            std::span<const int> labels, std::span<const double> class_weights) {
    ClassificationPass pass;
    pass.embeddings = encoder_forward(tape, adj, tape.constant(x), params, encoder_config(config), "enc");
    Var w = tape.parameter(params, kClassifierWeight);
    Var b = tape.parameter(params, kClassifierBias);
    pass.loss = ce_loss_logits(predict_logits(pass.embeddings, users, num_users, w, b), labels, class_weights);
    return pass;
}

PretrainResult pretrain_ssl(const BipartiteGraph& graph, const DenseMatrix& features, const TrainingConfig& config) {
    validate(config);
    check_features(features, graph.num_nodes(), config);
    const auto start = Clock::now();
    const EncoderConfig enc = encoder_config(config);
    const SparseAdjacency& adj = graph.adjacency();

    ParameterStore params;
    init_encoder(params, enc, derive_seed(config.seed, "encoder"), "enc");
    init_discriminator(params, config.embedding_dim, derive_seed(config.seed, "discriminator"));

    PretrainResult result;
    const bool dci = config.ssl == SslObjective::dci;
    if (dci) {
        if (config.clusters > graph.num_nodes()) {
            throw ConfigError("clusters (" + std::to_string(config.clusters) + ") exceeds the node count");
        }
        result.clusters = kmeans(encode(adj, features, params, enc, "enc"), config.clusters,
                                 derive_seed(config.seed, "recluster", 0));
    }

    for (std::size_t epoch = 0; epoch < config.pretrain_epochs; ++epoch) {
        if (dci && epoch > 0 && epoch % config.recluster_interval == 0) {
            result.clusters = maybe_recluster(epoch, config.recluster_interval, encode(adj, features, params, enc, "enc"),
                                              result.clusters, config.seed);
        }
        const CorruptedView neg = corrupt(features, derive_seed(config.seed, "corrupt", epoch));
        Tape tape;
        Var loss = ssl_objective(tape, adj, features, neg.x, params, config, result.clusters);
        const double loss_value = loss.value()(0, 0);
        if (!std::isfinite(loss_value)) {
            throw NumericalError("non-finite self-supervised loss at epoch " + std::to_string(epoch));
        }
        result.loss_history.push_back(loss_value);
        params.adam_step(tape.backward(loss), config.adam);
    }
    result.params = params.subset("enc.");
    result.seconds = seconds_since(start);
    return result;
}

FoldResult joint_train(const Dataset& dataset, const TrainingConfig& config, const Fold& fold, std::size_t fold_index) {
    validate(config);
    check_features(dataset.features.x, dataset.graph.num_nodes(), config);
    ParameterStore params;
    init_encoder(params, encoder_config(config), derive_seed(config.seed, "encoder"), "enc");
    init_classifier(params, config.embedding_dim, derive_seed(config.seed, "classifier", fold_index));
    return classify(dataset, std::move(params), config, fold, fold_index);
}

FoldResult finetune_classify(const Dataset& dataset, const ParameterStore& pretrained, const TrainingConfig& config,
                             const Fold& fold, std::size_t fold_index) {
    validate(config);
    check_features(dataset.features.x, dataset.graph.num_nodes(), config);
    ParameterStore params = pretrained.subset("enc.");
    init_classifier(params, config.embedding_dim, derive_seed(config.seed, "classifier", fold_index));
    return classify(dataset, std::move(params), config, fold, fold_index);
}

}  // namespace gad
