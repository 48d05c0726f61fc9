#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gad/train/experiment.hpp"

namespace gad {

using Json = nlohmann::ordered_json;

enum class ReportFormat { json, csv };
std::string to_string(ReportFormat format);
ReportFormat parse_report_format(const std::string& s);

/// "85.12 ± 1.03": fractions rendered as percentages with two decimals.
std::string format_pct(double mean, double std);

Json report_to_json(const ExperimentReport& report);
/// Pretty-printed JSON with a trailing newline.
std::string serialize_report(const ExperimentReport& report);
/// One row per fold plus a closing "mean" row.
std::string report_to_csv(const ExperimentReport& report);
void write_report(const std::filesystem::path& path, const ExperimentReport& report, ReportFormat format);

/// ROC points of every fold at its selected iteration: fold,fpr,tpr,threshold.
std::string roc_curves_csv(const ExperimentReport& report);

/// Copy of a serialized report with every wall-clock field removed, for comparing runs.
Json strip_timing(Json report);

/// The part of a report the comparison table needs.
struct ReportSummary {
    std::string dataset;
    std::string model;
    double auc_mean = 0.0;
    double auc_std = 0.0;
    std::vector<double> fold_aucs;
};

/// Throws DataError when schema_version is missing or not the supported version.
ReportSummary summarize_report(const Json& report);
ReportSummary load_report_summary(const std::filesystem::path& path);

/// Rows are models and columns are datasets, each in order of first appearance.
struct ComparisonTable {
    std::vector<std::string> models;
    std::vector<std::string> datasets;
    /// cells[row][col]; empty optional where a model was not run on a dataset.
    std::vector<std::vector<std::optional<ReportSummary>>> cells;
};

/// Throws DataError on an empty list or a repeated (model, dataset) pair.
ComparisonTable build_comparison(const std::vector<ReportSummary>& reports);
std::string comparison_to_csv(const ComparisonTable& table);
Json comparison_to_json(const ComparisonTable& table);

}  // namespace gad
