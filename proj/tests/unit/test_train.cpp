#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include "gad/errors.hpp"
#include "gad/graph/folds.hpp"
#include "gad/numeric/rng.hpp"
#include "gad/ssl/infomax.hpp"
#include "gad/train/checkpoint.hpp"
#include "gad/train/experiment.hpp"
#include "gad/train/report.hpp"
#include "test_support.hpp"

using namespace gad;
namespace fs = std::filesystem;

namespace {

const Dataset& toy() {
    static const Dataset d = [] {
        PlantedAnomalyOptions o;
        o.users = 60;
        o.objects = 12;
        o.communities = 3;
        o.anomaly_fraction = 0.2;
        o.feature_dim = 6;
        o.feature_shift = 1.0;
        Dataset ds = make_planted_anomaly_dataset(o, 4);
        ds.name = "toy";
        return ds;
    }();
    return d;
}

TrainingConfig small_config() {
    TrainingConfig c;
    c.feature_dim = 6;
    c.embedding_dim = 8;
    c.pretrain_epochs = 6;
    c.classify_iterations = 8;
    c.recluster_interval = 3;
    c.folds = 2;
    c.seed = 3;
    return c;
}

Fold first_fold(std::size_t k = 3) { return stratified_kfold(toy().labels, k, 1).folds[0]; }

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("gad_test_train_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("default configuration snapshot") {
    const auto kv = to_key_values(TrainingConfig{});
    const std::map<std::string, std::string> expected{
        {"adam-eps", "1e-08"},      {"beta1", "0.9"},
        {"beta2", "0.999"},         {"class-weighting", "false"},
        {"classify-iterations", "100"}, {"clusters", "2"},
        {"early-stopping", "off"},  {"embedding-dim", "128"},
        {"encoder", "multi"},       {"feature-dim", "64"},
        {"folds", "10"},            {"gat-slope", "0.2"},
        {"gin-eps", "0"},           {"layers", "2"},
        {"learn-gin-eps", "false"}, {"lr", "0.01"},
        {"members", "gin,gat"},     {"merge", "mean"},
        {"merge-weights", ""},      {"mode", "decoupled"},
        {"parallel-folds", "false"}, {"pretrain-epochs", "50"},
        {"protocol", "best_test"},  {"recluster-interval", "20"},
        {"seed", "0"},              {"ssl", "dci"},
        {"validation-fraction", "0.2"}};
    CHECK(kv == expected);
    CHECK(validation_errors(TrainingConfig{}).empty());
    CHECK(default_folds_for("amazon") == 5);
    CHECK(default_folds_for("wikipedia") == 10);
}

TEST_CASE("key-value round trip and overrides") {
    TrainingConfig c = small_config();
    c.mode = TrainingMode::joint;
    c.encoder = EncoderKind::gat;
    c.early_stopping_patience = 4;
    c.merge = MergeOp::weighted_mean;
    c.merge_weights = {0.25, 0.75};
    c.adam.lr = 0.005;
    const TrainingConfig back = apply_key_values(TrainingConfig{}, to_key_values(c));
    CHECK(to_key_values(back) == to_key_values(c));
    CHECK(back.early_stopping_patience == std::optional<std::size_t>(4));

    const TrainingConfig tuned = apply_key_values(TrainingConfig{}, {{"lr", "0.1"}, {"ssl", "dgi"}, {"early-stopping", "7"}});
    CHECK(tuned.adam.lr == 0.1);
    CHECK(tuned.ssl == SslObjective::dgi);
    CHECK(*tuned.early_stopping_patience == 7);
}

TEST_CASE("configuration problems are reported together") {
    try {
        apply_key_values(TrainingConfig{}, {{"lr", "fast"}, {"bogus", "1"}, {"encoder", "mlp"}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("lr") != std::string::npos);
        CHECK(msg.find("bogus") != std::string::npos);
        CHECK(msg.find("encoder") != std::string::npos);
    }
    TrainingConfig bad;
    bad.adam.lr = -1.0;
    bad.folds = 1;
    bad.embedding_dim = 0;
    CHECK(validation_errors(bad).size() >= 3);
    CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("model labels") {
    TrainingConfig c;
    CHECK(model_label(c) == "MultiEncoder");
    c.mode = TrainingMode::joint;
    c.encoder = EncoderKind::gin;
    CHECK(model_label(c) == "Joint GIN");
    c.mode = TrainingMode::decoupled;
    c.ssl = SslObjective::dgi;
    CHECK(model_label(c) == "Decoupled DGI");
    c.ssl = SslObjective::dci;
    c.encoder = EncoderKind::gat;
    CHECK(model_label(c) == "Decoupled DCI (GAT)");
}

TEST_CASE("zero learning rate freezes the test AUC") {
    TrainingConfig c = small_config();
    c.mode = TrainingMode::joint;
    c.adam.lr = 0.0;
    const FoldResult r = joint_train(toy(), c, first_fold(), 0);
    REQUIRE(r.iterations_run == c.classify_iterations);
    for (double a : r.test_auc_history) CHECK(a == r.test_auc_history.front());
    for (double l : r.train_loss_history) CHECK(l == r.train_loss_history.front());
}

TEST_CASE("early stopping counts iterations without a lower loss") {
    TrainingConfig c = small_config();
    c.mode = TrainingMode::joint;
    c.adam.lr = 0.0;
    c.early_stopping_patience = 1;
    CHECK(joint_train(toy(), c, first_fold(), 0).iterations_run == 2);
    c.early_stopping_patience = 3;
    CHECK(joint_train(toy(), c, first_fold(), 0).iterations_run == 4);
    c.early_stopping_patience.reset();
    c.adam.lr = 0.01;
    CHECK(joint_train(toy(), c, first_fold(), 0).iterations_run == c.classify_iterations);
}

TEST_CASE("zero pretraining epochs returns the initial encoder") {
    TrainingConfig c = small_config();
    c.pretrain_epochs = 0;
    const PretrainResult p = pretrain_ssl(toy().graph, toy().features.x, c);
    CHECK(p.loss_history.empty());
    ParameterStore init;
    init_encoder(init, encoder_config(c), derive_seed(c.seed, "encoder"), "enc");
    CHECK(p.params.names() == init.names());
    for (const auto& n : init.names()) CHECK(p.params.get(n) == init.get(n));
    CHECK(!p.params.contains(kDiscriminatorParam));
}

TEST_CASE("one-cluster DCI pretraining follows the DGI trajectory") {
    TrainingConfig dci = small_config();
    dci.clusters = 1;
    TrainingConfig dgi = dci;
    dgi.ssl = SslObjective::dgi;
    const PretrainResult a = pretrain_ssl(toy().graph, toy().features.x, dci);
    const PretrainResult b = pretrain_ssl(toy().graph, toy().features.x, dgi);
    REQUIRE(a.loss_history.size() == b.loss_history.size());
    for (std::size_t i = 0; i < a.loss_history.size(); ++i)
        CHECK(a.loss_history[i] == doctest::Approx(b.loss_history[i]).epsilon(1e-10));
}

TEST_CASE("training losses go down") {
    TrainingConfig c = small_config();
    c.pretrain_epochs = 60;
    // each epoch draws a fresh corruption, so compare 10-epoch windows
    auto window = [](const std::vector<double>& v, std::size_t from) {
        double acc = 0.0;
        for (std::size_t i = from; i < from + 10; ++i) acc += v[i];
        return acc / 10.0;
    };
    for (SslObjective ssl : {SslObjective::dgi, SslObjective::dci}) {
        c.ssl = ssl;
        const PretrainResult p = pretrain_ssl(toy().graph, toy().features.x, c);
        CHECK(window(p.loss_history, 50) < window(p.loss_history, 0));
    }
    TrainingConfig j = small_config();
    j.mode = TrainingMode::joint;
    j.classify_iterations = 11;
    const FoldResult r = joint_train(toy(), j, first_fold(), 0);
    CHECK(r.train_loss_history[10] < r.train_loss_history[0]);
}

TEST_CASE("experiments are deterministic and aggregate their folds") {
    TrainingConfig c = small_config();
    const ExperimentReport a = run_experiment(toy(), c);
    c.parallel_folds = true;
    const ExperimentReport b = run_experiment(toy(), c);
    REQUIRE(a.folds.size() == 2);
    const auto [m, s] = mean_std({a.folds[0].best_auc, a.folds[1].best_auc});
    CHECK(a.auc_mean == doctest::Approx(m));
    CHECK(a.auc_std == doctest::Approx(s));
    CHECK(a.auc_std == doctest::Approx(std::abs(a.folds[0].best_auc - a.folds[1].best_auc) / 2.0));
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(a.folds[i].test_auc_history == b.folds[i].test_auc_history);
        CHECK(a.folds[i].best_auc == *std::max_element(a.folds[i].test_auc_history.begin(),
                                                       a.folds[i].test_auc_history.end()));
    }
    CHECK(a.pretrain_loss_history == b.pretrain_loss_history);
    c.parallel_folds = false;
    CHECK(strip_timing(report_to_json(run_experiment(toy(), c))).dump() == strip_timing(report_to_json(a)).dump());
}

TEST_CASE("validation protocol selects on held-out training users") {
    TrainingConfig c = small_config();
    c.mode = TrainingMode::joint;
    c.protocol = SelectionProtocol::validation;
    const FoldResult r = joint_train(toy(), c, first_fold(), 0);
    REQUIRE(r.validation_auc.has_value());
    CHECK(r.best_auc == r.test_auc_history[r.best_iteration]);
    CHECK(*r.validation_auc >= 0.0);
}

TEST_CASE("mismatched feature width is a configuration error") {
    TrainingConfig c = small_config();
    c.feature_dim = 7;
    CHECK_THROWS_AS(pretrain_ssl(toy().graph, toy().features.x, c), ConfigError);
}

TEST_CASE("reports: json, csv, timing strip, schema and comparison") {
    TrainingConfig c = small_config();
    c.mode = TrainingMode::joint;
    const ExperimentReport r = run_experiment(toy(), c);
    const Json j = report_to_json(r);
    CHECK(j["schema_version"] == kReportSchemaVersion);
    CHECK(j["folds"].size() == 2);
    CHECK(j["auc_pct"] == format_pct(r.auc_mean, r.auc_std));
    CHECK(format_pct(0.85123, 0.01034) == "85.12 ± 1.03");

    const Json stripped = strip_timing(j);
    CHECK(!stripped.contains("timestamp"));
    CHECK(!stripped.contains("total_seconds"));
    CHECK(!stripped["folds"][0].contains("seconds"));
    CHECK(stripped["folds"][0].contains("auc"));

    const std::string csv = report_to_csv(r);
    CHECK(csv.rfind("dataset,model,fold,auc,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.find("toy,Joint MultiEncoder,mean,") != std::string::npos);

    const ReportSummary sum = summarize_report(j);
    CHECK(sum.fold_aucs.size() == 2);
    Json old = j;
    old["schema_version"] = 99;
    CHECK_THROWS_AS(summarize_report(old), DataError);
    old.erase("schema_version");
    CHECK_THROWS_AS(summarize_report(old), DataError);

    const fs::path dir = scratch("reports");
    write_report(dir / "r.json", r, ReportFormat::json);
    CHECK(load_report_summary(dir / "r.json").auc_mean == doctest::Approx(r.auc_mean));
    std::ofstream(dir / "junk.json") << "{not json";
    CHECK_THROWS_AS(load_report_summary(dir / "junk.json"), DataError);

    const std::string roc = roc_curves_csv(r);
    CHECK(roc.rfind("fold,fpr,tpr,threshold\n", 0) == 0);
}

TEST_CASE("comparison table layout") {
    auto mk = [](std::string model, std::string data, double m) {
        ReportSummary s;
        s.model = std::move(model);
        s.dataset = std::move(data);
        s.auc_mean = m;
        s.auc_std = 0.01;
        s.fold_aucs = {m};
        return s;
    };
    const ComparisonTable t = build_comparison({mk("A", "x", 0.8), mk("B", "y", 0.7), mk("A", "y", 0.9)});
    CHECK(t.models == std::vector<std::string>{"A", "B"});
    CHECK(t.datasets == std::vector<std::string>{"x", "y"});
    CHECK(!t.cells[1][0].has_value());
    CHECK(comparison_to_csv(t) == "model,x,y\nA,\"80.00 ± 1.00\",\"90.00 ± 1.00\"\nB,,\"70.00 ± 1.00\"\n");
    const Json jt = comparison_to_json(t);
    CHECK(jt["rows"][1]["datasets"]["x"].is_null());
    CHECK_THROWS_AS(build_comparison({}), DataError);
    CHECK_THROWS_AS(build_comparison({mk("A", "x", 0.8), mk("A", "x", 0.7)}), DataError);
}

TEST_CASE("checkpoint round trip") {
    TrainingConfig c = small_config();
    const PretrainResult p = pretrain_ssl(toy().graph, toy().features.x, c);
    const fs::path dir = scratch("ckpt") / "nested";
    write_checkpoint(dir, p.params, c, p.clusters);
    const Checkpoint back = read_checkpoint(dir);
    CHECK(back.params.names() == p.params.names());
    for (const auto& n : p.params.names()) CHECK(back.params.get(n) == p.params.get(n));
    CHECK(to_key_values(back.config) == to_key_values(c));
    CHECK(back.clusters.k == p.clusters.k);
    CHECK(back.clusters.assignments == p.clusters.assignments);
    CHECK(back.clusters.centroids == p.clusters.centroids);

    std::ofstream(dir / "params.f64", std::ios::binary | std::ios::app) << 'x';
    CHECK_THROWS_AS(read_params_f64(dir / "params.f64"), DataError);
}
