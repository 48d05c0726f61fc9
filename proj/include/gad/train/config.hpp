#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gad/encoders/encoder.hpp"
#include "gad/numeric/params.hpp"

namespace gad {

enum class TrainingMode { joint, decoupled };
enum class SslObjective { dgi, dci };
/// best_test: report the best test AUC over all iterations (optimistic, since it
/// selects on the test set). validation: pick the iteration
/// by AUC on a stratified split of the training users, then report its test AUC.
enum class SelectionProtocol { best_test, validation };

struct TrainingConfig {
    TrainingMode mode = TrainingMode::decoupled;
    EncoderKind encoder = EncoderKind::multi;
    SslObjective ssl = SslObjective::dci;

    std::size_t pretrain_epochs = 50;
    std::size_t classify_iterations = 100;
    std::size_t recluster_interval = 20;
    std::size_t clusters = 2;

    AdamOptions adam{};

    std::size_t embedding_dim = 128;
    std::size_t feature_dim = 64;
    std::size_t layers = 2;
    double gin_eps = 0.0;
    bool learn_gin_eps = false;
    double gat_slope = 0.2;
    std::vector<EncoderKind> members{EncoderKind::gin, EncoderKind::gat};
    MergeOp merge = MergeOp::mean;
    std::vector<double> merge_weights;

    std::size_t folds = 10;
    std::uint64_t seed = 0;
    /// Stop classification after this many iterations without a lower training loss.
    std::optional<std::size_t> early_stopping_patience;

    SelectionProtocol protocol = SelectionProtocol::best_test;
    double validation_fraction = 0.2;
    bool class_weighting = false;
    bool parallel_folds = false;
};

inline constexpr std::size_t kDefaultEarlyStoppingPatience = 10;

/// Fold count used for a dataset name: 5 for Amazon (few labeled anomalies), otherwise 10.
std::size_t default_folds_for(const std::string& dataset_name);

/// Every problem found, empty when the config is usable.
std::vector<std::string> validation_errors(const TrainingConfig& config);
/// Throws ConfigError listing every problem at once.
void validate(const TrainingConfig& config);

EncoderConfig encoder_config(const TrainingConfig& config);

/// Flat key=value snapshot with kebab-case keys (the same names the CLI flags use).
std::map<std::string, std::string> to_key_values(const TrainingConfig& config);
/// Applies known keys onto base. Unknown keys and malformed values are collected
/// and reported together in one ConfigError.
TrainingConfig apply_key_values(TrainingConfig base, const std::map<std::string, std::string>& kv);

std::string to_string(TrainingMode mode);
std::string to_string(SslObjective ssl);
std::string to_string(SelectionProtocol protocol);

/// Row label used in comparison tables, e.g. "Joint GIN", "Decoupled DCI (GAT)", "MultiEncoder".
std::string model_label(const TrainingConfig& config);

}  // namespace gad
