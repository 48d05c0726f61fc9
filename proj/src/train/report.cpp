#include "gad/train/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gad/errors.hpp"
#include "gad/metrics.hpp"

namespace gad {

std::string to_string(ReportFormat format) { return format == ReportFormat::json ? "json" : "csv"; }

ReportFormat parse_report_format(const std::string& s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    throw ConfigError("unknown report format '" + s + "' (expected json or csv)");
}

std::string format_pct(double mean, double std) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f ± %.2f", 100.0 * mean, 100.0 * std);
    return buf;
}

namespace {

std::string protocol_note(SelectionProtocol p) {
    if (p == SelectionProtocol::best_test) return "fold AUC is the best test AUC over all classification iterations";
    return "fold AUC is the test AUC at the iteration with the best AUC on a validation split of the training users";
}

std::string csv_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Json report_to_json(const ExperimentReport& r) {
    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["dataset"] = r.dataset;
    j["model"] = r.model;
    j["protocol"] = to_string(r.config.protocol);
    j["protocol_note"] = protocol_note(r.config.protocol);
    Json cfg = Json::object();
    for (const auto& [k, v] : to_key_values(r.config)) cfg[k] = v;
    j["config"] = cfg;
    j["seeds"] = {{"base", r.config.seed}, {"folds", r.fold_seed}, {"features", r.feature_seed}};
    j["auc_mean"] = r.auc_mean;
    j["auc_std"] = r.auc_std;
    j["auc_pct"] = format_pct(r.auc_mean, r.auc_std);
    j["seconds_mean"] = r.seconds_mean;
    j["seconds_std"] = r.seconds_std;
    j["pretrain_seconds"] = r.pretrain_seconds;
    j["total_seconds"] = r.total_seconds;
    j["timestamp"] = r.timestamp;
    j["pretrain_loss_history"] = r.pretrain_loss_history;
    Json folds = Json::array();
    for (const FoldResult& f : r.folds) {
        Json jf;
        jf["fold"] = f.fold;
        jf["auc"] = f.best_auc;
        jf["best_iteration"] = f.best_iteration;
        jf["iterations_run"] = f.iterations_run;
        if (f.validation_auc) jf["validation_auc"] = *f.validation_auc;
        jf["seconds"] = f.seconds;
        const ConfusionCounts c = confusion_at_threshold(f.test_scores, f.test_labels, 0.5);
        jf["confusion_at_0_5"] = {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
        jf["test_auc_history"] = f.test_auc_history;
        jf["train_loss_history"] = f.train_loss_history;
        folds.push_back(std::move(jf));
    }
    j["folds"] = std::move(folds);
    return j;
}

std::string serialize_report(const ExperimentReport& report) { return report_to_json(report).dump(2) + "\n"; }

std::string report_to_csv(const ExperimentReport& r) {
    std::ostringstream out;
    out << "dataset,model,fold,auc,auc_pct,best_iteration,iterations_run,seconds\n";
    for (const FoldResult& f : r.folds) {
        char pct[32];
        std::snprintf(pct, sizeof pct, "%.2f", 100.0 * f.best_auc);
        out << r.dataset << ',' << r.model << ',' << f.fold << ',' << csv_double(f.best_auc) << ',' << pct << ','
            << f.best_iteration << ',' << f.iterations_run << ',' << csv_double(f.seconds) << '\n';
    }
    out << r.dataset << ',' << r.model << ",mean," << csv_double(r.auc_mean) << ",\"" << format_pct(r.auc_mean, r.auc_std)
        << "\",,," << csv_double(r.seconds_mean) << '\n';
    return out.str();
}

void write_report(const std::filesystem::path& path, const ExperimentReport& report, ReportFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << (format == ReportFormat::json ? serialize_report(report) : report_to_csv(report));
    if (!out) throw DataError("write failed for " + path.string());
}

std::string roc_curves_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "fold,fpr,tpr,threshold\n";
    for (const FoldResult& f : report.folds) {
        for (const RocPoint& p : tpr_fpr_curve(f.test_scores, f.test_labels)) {
            out << f.fold << ',' << csv_double(p.fpr) << ',' << csv_double(p.tpr) << ','
                << (std::isinf(p.threshold) ? std::string("inf") : csv_double(p.threshold)) << '\n';
        }
    }
    return out.str();
}

Json strip_timing(Json report) {
    static const char* const kTimingKeys[] = {"seconds", "seconds_mean", "seconds_std", "pretrain_seconds",
                                              "total_seconds", "timestamp"};
    if (report.is_object()) {
        for (const char* key : kTimingKeys) report.erase(key);
        for (auto& [key, value] : report.items()) value = strip_timing(value);
    } else if (report.is_array()) {
        for (auto& value : report) value = strip_timing(value);
    }
    return report;
}

ReportSummary summarize_report(const Json& j) {
    if (!j.is_object() || !j.contains("schema_version")) throw DataError("report has no schema_version");
    if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kReportSchemaVersion) {
        throw DataError("incompatible report schema_version " + j["schema_version"].dump() + " (supported: " +
                        std::to_string(kReportSchemaVersion) + ")");
    }
    try {
        ReportSummary s;
        s.dataset = j.at("dataset").get<std::string>();
        s.model = j.at("model").get<std::string>();
        s.auc_mean = j.at("auc_mean").get<double>();
        s.auc_std = j.at("auc_std").get<double>();
        for (const auto& f : j.at("folds")) s.fold_aucs.push_back(f.at("auc").get<double>());
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    }
}

ReportSummary load_report_summary(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(path.string() + ": not a JSON report: " + e.what());
    }
    try {
        return summarize_report(j);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

ComparisonTable build_comparison(const std::vector<ReportSummary>& reports) {
    if (reports.empty()) throw DataError("no reports to compare");
    ComparisonTable t;
    auto index_of = [](std::vector<std::string>& names, const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it != names.end()) return std::size_t(it - names.begin());
        names.push_back(name);
        return names.size() - 1;
    };
    for (const auto& r : reports) {
        index_of(t.models, r.model);
        index_of(t.datasets, r.dataset);
    }
    t.cells.assign(t.models.size(), std::vector<std::optional<ReportSummary>>(t.datasets.size()));
    for (const auto& r : reports) {
        auto& cell = t.cells[index_of(t.models, r.model)][index_of(t.datasets, r.dataset)];
        if (cell) throw DataError("two reports for model '" + r.model + "' on dataset '" + r.dataset + "'");
        cell = r;
    }
    return t;
}

std::string comparison_to_csv(const ComparisonTable& t) {
    std::ostringstream out;
    out << "model";
    for (const auto& d : t.datasets) out << ',' << d;
    out << '\n';
    for (std::size_t i = 0; i < t.models.size(); ++i) {
        out << t.models[i];
        for (const auto& cell : t.cells[i]) {
            out << ',';
            if (cell) out << '"' << format_pct(cell->auc_mean, cell->auc_std) << '"';
        }
        out << '\n';
    }
    return out.str();
}

Json comparison_to_json(const ComparisonTable& t) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < t.models.size(); ++i) {
        Json row;
        row["model"] = t.models[i];
        Json cols = Json::object();
        for (std::size_t c = 0; c < t.datasets.size(); ++c) {
            const auto& cell = t.cells[i][c];
            if (!cell) {
                cols[t.datasets[c]] = nullptr;
                continue;
            }
            cols[t.datasets[c]] = {{"auc_mean", cell->auc_mean},
                                   {"auc_std", cell->auc_std},
                                   {"auc_pct", format_pct(cell->auc_mean, cell->auc_std)},
                                   {"fold_aucs", cell->fold_aucs}};
        }
        row["datasets"] = std::move(cols);
        rows.push_back(std::move(row));
    }
    return {{"schema_version", kReportSchemaVersion}, {"datasets", t.datasets}, {"rows", std::move(rows)}};
}

}  // namespace gad
