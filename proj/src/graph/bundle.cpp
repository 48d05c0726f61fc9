#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gad/errors.hpp"
#include "gad/graph/dataset.hpp"
#include "gad/graph/loaders.hpp"

namespace gad {

namespace {

static_assert(std::endian::native == std::endian::little, "features.f64 I/O assumes a little-endian host");

constexpr char kFeatureMagic[8] = {'G', 'A', 'D', 'F', 'E', 'A', 'T', '1'};

std::string format_pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::size_t parse_count(const std::map<std::string, std::string>& meta, const std::string& key,
                        const std::filesystem::path& path) {
    auto it = meta.find(key);
    if (it == meta.end()) throw DataError(path.string() + ": missing key '" + key + "'");
    try {
        return std::stoull(it->second);
    } catch (const std::exception&) {
        throw DataError(path.string() + ": invalid value for '" + key + "'");
    }
}

}  // namespace

void write_features_f64(const std::filesystem::path& path, const DenseMatrix& x) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    const std::uint32_t rows = std::uint32_t(x.rows());
    const std::uint32_t cols = std::uint32_t(x.cols());
    out.write(kFeatureMagic, sizeof kFeatureMagic);
    out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    out.write(reinterpret_cast<const char*>(x.data()), std::streamsize(x.size() * sizeof(double)));
    if (!out) throw DataError("write failed for " + path.string());
}

DenseMatrix read_features_f64(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    char magic[8];
    std::uint32_t rows = 0, cols = 0;
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char*>(&rows), sizeof rows);
    in.read(reinterpret_cast<char*>(&cols), sizeof cols);
    if (!in || std::memcmp(magic, kFeatureMagic, sizeof magic) != 0) {
        throw DataError(path.string() + ": not a feature matrix (bad header)");
    }
    DenseMatrix x(rows, cols);
    in.read(reinterpret_cast<char*>(x.data()), std::streamsize(x.size() * sizeof(double)));
    if (!in) throw DataError(path.string() + ": truncated feature data");
    if (in.peek() != std::char_traits<char>::eof()) throw DataError(path.string() + ": trailing bytes after features");
    return x;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DataError(path.string(), line_no, "expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void write_key_values(const std::filesystem::path& path, const std::map<std::string, std::string>& kv) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
    if (!out) throw DataError("write failed for " + path.string());
}

void write_bundle(const std::filesystem::path& dir, const Dataset& dataset) {
    std::filesystem::create_directories(dir);
    write_edge_list(dataset.graph, dataset.labels, dir / "graph.labels", dir / "graph.edges");
    write_features_f64(dir / "features.f64", dataset.features.x);
    const DatasetStats s = dataset_stats(dataset.graph, dataset.labels);
    std::map<std::string, std::string> meta{
        {"name", dataset.name},
        {"users", std::to_string(s.users)},
        {"objects", std::to_string(s.objects)},
        {"nodes", std::to_string(s.nodes)},
        {"edges", std::to_string(s.edges)},
        {"labeled", std::to_string(s.labeled)},
        {"abnormal", std::to_string(s.abnormal)},
        {"normal_pct", format_pct(s.normal_pct)},
        {"abnormal_pct", format_pct(s.abnormal_pct)},
        {"feature_dim", std::to_string(dataset.features.x.cols())},
        {"feature_scheme", to_string(dataset.features.scheme)},
        {"feature_seed", std::to_string(dataset.features.seed)},
        {"standardized", dataset.features.standardized ? "1" : "0"},
    };
    write_key_values(dir / "meta", meta);
}

Dataset read_bundle(const std::filesystem::path& dir) {
    const auto meta_path = dir / "meta";
    const auto meta = read_key_values(meta_path);
    EdgeListOptions opts;
    opts.partial_labels = true;
    opts.num_users = parse_count(meta, "users", meta_path);
    opts.num_objects = parse_count(meta, "objects", meta_path);
    auto loaded = load_edge_list(dir / "graph.labels", dir / "graph.edges", opts);

    Dataset d;
    d.name = meta.contains("name") ? meta.at("name") : dir.filename().string();
    d.graph = std::move(loaded.graph);
    d.labels = std::move(loaded.labels);
    d.features.x = read_features_f64(dir / "features.f64");
    if (d.features.x.rows() != d.graph.num_nodes()) {
        throw DataError((dir / "features.f64").string() + ": " + std::to_string(d.features.x.rows()) +
                        " rows but graph has " + std::to_string(d.graph.num_nodes()) + " nodes");
    }
    if (auto it = meta.find("feature_scheme"); it != meta.end()) d.features.scheme = parse_feature_scheme(it->second);
    if (auto it = meta.find("feature_seed"); it != meta.end()) d.features.seed = std::stoull(it->second);
    if (auto it = meta.find("standardized"); it != meta.end()) d.features.standardized = it->second == "1";
    return d;
}

}  // namespace gad
