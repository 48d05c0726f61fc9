#include "gad/train/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <future>

#include "gad/graph/folds.hpp"
#include "gad/numeric/rng.hpp"

namespace gad {

std::pair<double, double> mean_std(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / double(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return {mean, std::sqrt(sq / double(values.size()))};
}

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

ExperimentReport run_experiment(const Dataset& dataset, const TrainingConfig& config) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();

    ExperimentReport report;
    report.dataset = dataset.name;
    report.model = model_label(config);
    report.config = config;
    report.feature_seed = dataset.features.seed;
    report.fold_seed = derive_seed(config.seed, "folds");
    const FoldPlan plan = stratified_kfold(dataset.labels, config.folds, report.fold_seed);

    std::optional<PretrainResult>& pretrained = report.pretrained;
    if (config.mode == TrainingMode::decoupled) {
        pretrained = pretrain_ssl(dataset.graph, dataset.features.x, config);
        report.pretrain_seconds = pretrained->seconds;
        report.pretrain_loss_history = pretrained->loss_history;
    }

    auto run_fold = [&](std::size_t i) {
        return pretrained ? finetune_classify(dataset, pretrained->params, config, plan.folds[i], i)
                          : joint_train(dataset, config, plan.folds[i], i);
    };

    if (config.parallel_folds) {
        std::vector<std::future<FoldResult>> pending;
        for (std::size_t i = 0; i < plan.folds.size(); ++i) pending.push_back(std::async(std::launch::async, run_fold, i));
        for (auto& f : pending) report.folds.push_back(f.get());
    } else {
        for (std::size_t i = 0; i < plan.folds.size(); ++i) report.folds.push_back(run_fold(i));
    }

    std::vector<double> aucs, secs;
    for (const auto& f : report.folds) {
        aucs.push_back(f.best_auc);
        secs.push_back(f.seconds);
    }
    std::tie(report.auc_mean, report.auc_std) = mean_std(aucs);
    std::tie(report.seconds_mean, report.seconds_std) = mean_std(secs);
    report.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.timestamp = utc_timestamp();
    return report;
}

}  // namespace gad
