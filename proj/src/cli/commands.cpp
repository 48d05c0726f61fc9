#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "gad/cli.hpp"
#include "gad/errors.hpp"
#include "gad/graph/dataset.hpp"
#include "gad/graph/loaders.hpp"
#include "gad/train/checkpoint.hpp"
#include "gad/train/experiment.hpp"
#include "gad/train/report.hpp"

namespace gad {

namespace {

struct PreprocessArgs {
    std::string labels, edges, ids2017, out, name;
    bool synthetic = false;
    std::size_t feature_dim = 64;
    std::uint64_t feature_seed = 0;
    std::string feature_scheme = "pseudo_random";
    bool partial_labels = false;
    std::optional<std::size_t> num_users, num_objects;
    std::string unknown_labels = "error";
    PlantedAnomalyOptions planted;
    std::uint64_t synthetic_seed = 0;
};

struct RunArgs {
    std::string bundle, out, format = "json", config_file, roc_csv, checkpoint_dir;
    std::map<std::string, std::string> overrides;
};

struct ReportArgs {
    std::vector<std::string> reports;
    std::string out, format = "csv";
};

const std::map<std::string, std::string>& flag_help() {
    static const std::map<std::string, std::string> help{
        {"mode", "joint | decoupled"},
        {"encoder", "gin | gat | gcn | multi"},
        {"ssl", "dgi | dci (decoupled mode)"},
        {"pretrain-epochs", "self-supervised epochs"},
        {"classify-iterations", "classification iterations per fold"},
        {"recluster-interval", "epochs between cluster refreshes (dci)"},
        {"clusters", "number of clusters K (dci)"},
        {"lr", "Adam learning rate"},
        {"beta1", "Adam beta1"},
        {"beta2", "Adam beta2"},
        {"adam-eps", "Adam epsilon"},
        {"embedding-dim", "embedding width"},
        {"feature-dim", "input feature width (defaults to the bundle's)"},
        {"layers", "encoder layers"},
        {"gin-eps", "GIN self weight epsilon"},
        {"learn-gin-eps", "make GIN epsilon learnable (true/false)"},
        {"gat-slope", "LeakyReLU slope in GAT attention"},
        {"members", "multi-encoder members, comma separated"},
        {"merge", "mean | max | weighted_mean"},
        {"merge-weights", "weights for weighted_mean, comma separated"},
        {"folds", "cross-validation folds (defaults to 10, 5 for amazon)"},
        {"seed", "base seed"},
        {"early-stopping", "off | patience in iterations"},
        {"protocol", "best_test | validation"},
        {"validation-fraction", "share of training users held out under the validation protocol"},
        {"class-weighting", "inverse-frequency class weights (true/false)"},
        {"parallel-folds", "run folds concurrently (true/false)"},
    };
    return help;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("write failed for " + path.string());
}

int cmd_preprocess(const PreprocessArgs& a, std::ostream& out) {
    const int sources = int(!a.labels.empty() || !a.edges.empty()) + int(!a.ids2017.empty()) + int(a.synthetic);
    if (sources != 1) throw ConfigError("choose exactly one input: --labels/--edges, --ids2017 or --synthetic");
    if (!a.labels.empty() != !a.edges.empty()) throw ConfigError("--labels and --edges must be given together");

    Dataset ds;
    if (a.synthetic) {
        PlantedAnomalyOptions opts = a.planted;
        opts.feature_dim = a.feature_dim;
        ds = make_planted_anomaly_dataset(opts, a.synthetic_seed);
    } else {
        LoadedGraph loaded;
        if (!a.ids2017.empty()) {
            Ids2017Options opts;
            if (a.unknown_labels == "skip") opts.unknown_labels = UnknownLabelPolicy::skip;
            else if (a.unknown_labels != "error") throw ConfigError("--unknown-labels must be error or skip");
            loaded = preprocess_ids2017(a.ids2017, opts);
            ds.name = "ids2017";
        } else {
            EdgeListOptions opts;
            opts.partial_labels = a.partial_labels;
            opts.num_users = a.num_users;
            opts.num_objects = a.num_objects;
            loaded = load_edge_list(a.labels, a.edges, opts);
            ds.name = std::filesystem::path(a.labels).stem().string();
        }
        ds.graph = std::move(loaded.graph);
        ds.labels = std::move(loaded.labels);
        ds.features = standardize_features(
            generate_features(ds.graph, a.feature_dim, a.feature_seed, parse_feature_scheme(a.feature_scheme)));
    }
    if (!a.name.empty()) ds.name = a.name;
    write_bundle(a.out, ds);
    out << format_stats_row(ds.name, dataset_stats(ds.graph, ds.labels)) << '\n';
    return kExitOk;
}

int cmd_run(const RunArgs& a, std::ostream& out) {
    std::vector<std::string> problems;
    if (!a.config_file.empty() && !std::filesystem::is_regular_file(a.config_file))
        problems.push_back("config file not found: " + a.config_file);
    if (a.format != "json" && a.format != "csv") problems.push_back("--format must be json or csv");

    std::map<std::string, std::string> kv;
    if (!a.config_file.empty() && std::filesystem::is_regular_file(a.config_file)) {
        try {
            kv = read_config_file(a.config_file);
        } catch (const ConfigError& e) {
            problems.push_back(e.what());
        }
    }
    for (const auto& [k, v] : a.overrides) kv[k] = v;

    // one key at a time, so a malformed value does not hide range problems in the others
    TrainingConfig config;
    for (const auto& entry : kv) {
        try {
            config = apply_key_values(config, {entry});
        } catch (const ConfigError& e) {
            std::string what = e.what();
            if (const auto bullet = what.find("\n  - "); bullet != std::string::npos) what.erase(0, bullet + 5);
            problems.push_back(what);
        }
    }
    for (const auto& e : validation_errors(config)) problems.push_back(e);
    if (!problems.empty()) {
        std::string msg = "cannot start run:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ConfigError(msg);
    }
    if (!std::filesystem::is_directory(a.bundle)) throw DataError("bundle directory not found: " + a.bundle);

    const Dataset ds = read_bundle(a.bundle);
    if (!kv.contains("folds")) config.folds = default_folds_for(ds.name);
    if (!kv.contains("feature-dim")) config.feature_dim = ds.features.x.cols();

    const ExperimentReport report = run_experiment(ds, config);
    write_report(a.out, report, parse_report_format(a.format));
    if (!a.roc_csv.empty()) write_text(a.roc_csv, roc_curves_csv(report));
    if (!a.checkpoint_dir.empty()) {
        if (!report.pretrained) throw ConfigError("--checkpoint-dir needs decoupled mode");
        write_checkpoint(a.checkpoint_dir, report.pretrained->params, config, report.pretrained->clusters);
    }
    out << report.model << " on " << report.dataset << ": AUC " << format_pct(report.auc_mean, report.auc_std) << " over "
        << report.folds.size() << " folds\n";
    return kExitOk;
}

int cmd_report(const ReportArgs& a, std::ostream& out) {
    if (a.reports.empty()) throw ConfigError("report: give at least one report file");
    const ReportFormat format = parse_report_format(a.format);
    std::vector<ReportSummary> summaries;
    for (const auto& path : a.reports) summaries.push_back(load_report_summary(path));
    const ComparisonTable table = build_comparison(summaries);
    const std::string text =
        format == ReportFormat::csv ? comparison_to_csv(table) : comparison_to_json(table).dump(2) + "\n";
    if (a.out.empty()) out << text;
    else write_text(a.out, text);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graph anomaly detection: preprocess datasets, train encoders, compare reports"};
    app.name("gad");
    app.require_subcommand(1);

    PreprocessArgs pre;
    auto* p = app.add_subcommand("preprocess", "Build a dataset bundle from raw files or the synthetic generator");
    p->add_option("--labels", pre.labels, "label file (user_id label per line)");
    p->add_option("--edges", pre.edges, "edge file (user_id object_id per line)");
    p->add_option("--ids2017", pre.ids2017, "intrusion-detection flow CSV");
    p->add_flag("--synthetic", pre.synthetic, "generate the planted-anomaly benchmark");
    p->add_option("--out", pre.out, "bundle directory")->required();
    p->add_option("--name", pre.name, "dataset name stored in the bundle");
    p->add_option("--feature-dim", pre.feature_dim, "feature width")->capture_default_str();
    p->add_option("--feature-seed", pre.feature_seed, "feature seed")->capture_default_str();
    p->add_option("--feature-scheme", pre.feature_scheme, "pseudo_random | degree_structural")->capture_default_str();
    p->add_flag("--partial-labels", pre.partial_labels, "label file lists only some users");
    p->add_option("--num-users", pre.num_users, "user count when labels are partial");
    p->add_option("--num-objects", pre.num_objects, "object count (default: inferred from edges)");
    p->add_option("--unknown-labels", pre.unknown_labels, "error | skip unrecognised flow labels")->capture_default_str();
    p->add_option("--users", pre.planted.users, "synthetic users")->capture_default_str();
    p->add_option("--objects", pre.planted.objects, "synthetic objects")->capture_default_str();
    p->add_option("--anomaly-fraction", pre.planted.anomaly_fraction, "synthetic anomaly share")->capture_default_str();
    p->add_option("--feature-shift", pre.planted.feature_shift, "synthetic anomaly feature shift")->capture_default_str();
    p->add_option("--seed", pre.synthetic_seed, "synthetic graph seed")->capture_default_str();

    RunArgs run;
    auto* r = app.add_subcommand("run", "Train and evaluate over stratified folds");
    r->add_option("--bundle", run.bundle, "dataset bundle directory")->required();
    r->add_option("--out", run.out, "report path")->required();
    r->add_option("--format", run.format, "json | csv")->capture_default_str();
    r->add_option("--config", run.config_file, "key = value config file; flags override it");
    r->add_option("--roc-csv", run.roc_csv, "write per-fold ROC points here");
    r->add_option("--checkpoint-dir", run.checkpoint_dir, "save the pretrained encoder here (decoupled mode)");
    for (const auto& [key, help] : flag_help()) {
        r->add_option_function<std::string>(
            "--" + key, [&run, key = key](const std::string& v) { run.overrides[key] = v; }, help);
    }

    ReportArgs rep;
    auto* c = app.add_subcommand("report", "Merge JSON reports into a model × dataset table");
    c->add_option("reports", rep.reports, "report files");
    c->add_option("--out", rep.out, "output path (default: stdout)");
    c->add_option("--format", rep.format, "csv | json")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (p->parsed()) return cmd_preprocess(pre, out);
        if (r->parsed()) return cmd_run(run, out);
        return cmd_report(rep, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace gad
