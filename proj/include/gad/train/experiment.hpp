#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gad/graph/dataset.hpp"
#include "gad/train/config.hpp"
#include "gad/train/pipelines.hpp"

namespace gad {

inline constexpr int kReportSchemaVersion = 1;

struct ExperimentReport {
    std::string dataset;
    std::string model;
    TrainingConfig config;
    std::uint64_t fold_seed = 0;
    std::uint64_t feature_seed = 0;
    std::vector<FoldResult> folds;
    /// Mean and population standard deviation over folds (AUC as fractions).
    double auc_mean = 0.0;
    double auc_std = 0.0;
    double seconds_mean = 0.0;
    double seconds_std = 0.0;
    double pretrain_seconds = 0.0;
    std::vector<double> pretrain_loss_history;
    /// Decoupled mode only: the shared pretrained encoder.
    std::optional<PretrainResult> pretrained;
    double total_seconds = 0.0;
    /// ISO-8601 UTC wall-clock time at completion.
    std::string timestamp;
};

/// Runs every fold. Decoupled mode pretrains once (pretraining sees no labels, so it
/// is shared by all folds) and fine-tunes a copy per fold. With parallel_folds the
/// folds run concurrently; results are gathered in fold order either way.
ExperimentReport run_experiment(const Dataset& dataset, const TrainingConfig& config);

/// Mean and population standard deviation.
std::pair<double, double> mean_std(const std::vector<double>& values);

}  // namespace gad
