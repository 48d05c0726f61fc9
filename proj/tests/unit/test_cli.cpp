#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gad/cli.hpp"
#include "gad/errors.hpp"

using namespace gad;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome gad_cli(std::initializer_list<std::string> args) {
    std::vector<std::string> owned{"gad"};
    owned.insert(owned.end(), args);
    std::vector<const char*> argv;
    for (const auto& a : owned) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("gad_test_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::initializer_list<std::string> kSmallRun = {
    "--embedding-dim", "8", "--pretrain-epochs", "3", "--classify-iterations", "4", "--folds", "2"};

}  // namespace

TEST_CASE("config files: comments, spacing and errors with line numbers") {
    const fs::path dir = scratch("config");
    write_file(dir / "ok.conf", "# training\nlr = 0.05\n\n  encoder=gin  \nearly-stopping = 5\n");
    const auto kv = read_config_file(dir / "ok.conf");
    CHECK(kv.size() == 3);
    CHECK(kv.at("lr") == "0.05");
    CHECK(kv.at("encoder") == "gin");

    write_file(dir / "dup.conf", "lr = 1\n# x\nlr = 2\n");
    try {
        read_config_file(dir / "dup.conf");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("dup.conf:3") != std::string::npos);
    }
    write_file(dir / "bad.conf", "lr 0.1\n");
    CHECK_THROWS_AS(read_config_file(dir / "bad.conf"), ConfigError);
    CHECK_THROWS_AS(read_config_file(dir / "missing.conf"), ConfigError);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(gad_cli({}).code == kExitUsage);
    CHECK(gad_cli({"frobnicate"}).code == kExitUsage);
    CHECK(gad_cli({"run", "--bundle", "x"}).code == kExitUsage);
    CHECK(gad_cli({"report"}).code == kExitUsage);
    CHECK(gad_cli({"--help"}).code == kExitOk);
}

TEST_CASE("missing inputs exit with 2") {
    const fs::path dir = scratch("missing");
    CHECK(gad_cli({"run", "--bundle", (dir / "nope").string(), "--out", (dir / "r.json").string()}).code == kExitData);
    write_file(dir / "edges.txt", "0 5\n1 oops\n");
    write_file(dir / "labels.txt", "0 0\n1 1\n");
    const Outcome o = gad_cli({"preprocess", "--edges", (dir / "edges.txt").string(), "--labels",
                               (dir / "labels.txt").string(), "--out", (dir / "b").string()});
    CHECK(o.code == kExitData);
    CHECK(o.err.find("edges.txt:2") != std::string::npos);
}

TEST_CASE("preprocess, run and report end to end") {
    const fs::path dir = scratch("e2e");
    const std::string bundle = (dir / "bundle").string();
    Outcome pre = gad_cli({"preprocess", "--synthetic", "--users", "80", "--objects", "16", "--anomaly-fraction",
                           "0.2", "--feature-dim", "6", "--name", "toy", "--out", bundle});
    REQUIRE(pre.code == kExitOk);
    CHECK(pre.out.find("toy") != std::string::npos);
    CHECK(fs::exists(dir / "bundle" / "features.f64"));

    write_file(dir / "run.conf", "mode = joint\nencoder = gcn\nlr = 0.02\n");
    std::vector<std::string> args{"run", "--bundle", bundle, "--config", (dir / "run.conf").string(), "--out",
                                  (dir / "joint.json").string(), "--lr", "0.03"};
    args.insert(args.end(), kSmallRun);
    {
        std::vector<const char*> argv{"gad"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        REQUIRE(run_cli(int(argv.size()), argv.data(), out, err) == kExitOk);
    }
    const auto joint = nlohmann::json::parse(read_file(dir / "joint.json"));
    CHECK(joint["model"] == "Joint GCN");
    CHECK(joint["dataset"] == "toy");
    CHECK(joint["config"]["lr"] == "0.03");  // flag beats file
    CHECK(joint["config"]["feature-dim"] == "6");
    CHECK(joint["folds"].size() == 2);

    Outcome dec = gad_cli({"run", "--bundle", bundle, "--out", (dir / "multi.json").string(), "--roc-csv",
                           (dir / "roc.csv").string(), "--checkpoint-dir", (dir / "ckpt").string(), "--embedding-dim",
                           "8", "--pretrain-epochs", "3", "--classify-iterations", "4", "--folds", "2"});
    REQUIRE(dec.code == kExitOk);
    CHECK(fs::exists(dir / "ckpt" / "params.f64"));
    CHECK(read_file(dir / "roc.csv").rfind("fold,fpr,tpr,threshold\n", 0) == 0);

    Outcome rep = gad_cli({"report", (dir / "joint.json").string(), (dir / "multi.json").string()});
    REQUIRE(rep.code == kExitOk);
    CHECK(rep.out.rfind("model,toy\n", 0) == 0);
    CHECK(rep.out.find("Joint GCN,\"") != std::string::npos);
    CHECK(rep.out.find("MultiEncoder,\"") != std::string::npos);

    Outcome csv = gad_cli({"run", "--bundle", bundle, "--out", (dir / "r.csv").string(), "--format", "csv", "--mode",
                           "joint", "--embedding-dim", "8", "--classify-iterations", "3", "--folds", "2"});
    CHECK(csv.code == kExitOk);
    CHECK(read_file(dir / "r.csv").rfind("dataset,model,fold,auc,", 0) == 0);
}

TEST_CASE("run collects every bad option before starting") {
    const fs::path dir = scratch("badrun");
    REQUIRE(gad_cli({"preprocess", "--synthetic", "--users", "40", "--objects", "8", "--anomaly-fraction", "0.25",
                     "--feature-dim", "4", "--out", (dir / "b").string()})
                .code == kExitOk);
    const Outcome o = gad_cli({"run", "--bundle", (dir / "b").string(), "--out", (dir / "r.json").string(), "--lr",
                               "-1", "--encoder", "mlp", "--format", "xml"});
    CHECK(o.code == kExitUsage);
    CHECK(o.err.find("lr") != std::string::npos);
    CHECK(o.err.find("encoder") != std::string::npos);
    CHECK(o.err.find("format") != std::string::npos);
    CHECK(!fs::exists(dir / "r.json"));
}

TEST_CASE("report rejects foreign schema versions") {
    const fs::path dir = scratch("schema");
    write_file(dir / "old.json", R"({"schema_version": 0, "dataset": "a", "model": "m"})");
    CHECK(gad_cli({"report", (dir / "old.json").string()}).code == kExitData);
}
