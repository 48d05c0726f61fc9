#include "gad/train/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gad/errors.hpp"
#include "gad/graph/dataset.hpp"

namespace gad {

namespace {

static_assert(std::endian::native == std::endian::little, "params.f64 I/O assumes a little-endian host");

constexpr char kParamMagic[8] = {'G', 'A', 'D', 'P', 'A', 'R', 'M', '1'};

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& in, const std::filesystem::path& path) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw DataError(path.string() + ": truncated parameter file");
    return v;
}

}  // namespace

void write_params_f64(const std::filesystem::path& path, const ParameterStore& params) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(kParamMagic, sizeof kParamMagic);
    const auto names = params.names();
    put<std::uint64_t>(out, names.size());
    for (const auto& name : names) {
        const DenseMatrix& m = params.get(name);
        put<std::uint32_t>(out, std::uint32_t(name.size()));
        out.write(name.data(), std::streamsize(name.size()));
        put<std::uint64_t>(out, m.rows());
        put<std::uint64_t>(out, m.cols());
        out.write(reinterpret_cast<const char*>(m.data()), std::streamsize(m.size() * sizeof(double)));
    }
    if (!out) throw DataError("write failed for " + path.string());
}

ParameterStore read_params_f64(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kParamMagic, sizeof magic) != 0) {
        throw DataError(path.string() + ": not a parameter file (bad header)");
    }
    ParameterStore params;
    const auto count = get<std::uint64_t>(in, path);
    for (std::uint64_t t = 0; t < count; ++t) {
        const auto len = get<std::uint32_t>(in, path);
        if (len > 4096) throw DataError(path.string() + ": implausible tensor name length");
        std::string name(len, '\0');
        in.read(name.data(), len);
        const auto rows = get<std::uint64_t>(in, path);
        const auto cols = get<std::uint64_t>(in, path);
        if (rows > (1u << 30) || cols > (1u << 30)) throw DataError(path.string() + ": implausible tensor shape");
        DenseMatrix m(rows, cols);
        in.read(reinterpret_cast<char*>(m.data()), std::streamsize(m.size() * sizeof(double)));
        if (!in) throw DataError(path.string() + ": truncated parameter file");
        params.add(name, std::move(m));
    }
    if (in.peek() != std::char_traits<char>::eof()) throw DataError(path.string() + ": trailing bytes after parameters");
    return params;
}

void write_checkpoint(const std::filesystem::path& dir, const ParameterStore& params, const TrainingConfig& config,
                      const ClusterState& clusters) {
    std::filesystem::create_directories(dir);
    write_params_f64(dir / "params.f64", params);
    write_key_values(dir / "config", to_key_values(config));

    // clusters: "k <k>", "assignments a0 a1 ...", then one "centroid v0 v1 ..." line per cluster
    std::ofstream out(dir / "clusters", std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / "clusters").string());
    out << "k " << clusters.k << '\n' << "assignments";
    for (std::size_t a : clusters.assignments) out << ' ' << a;
    out << '\n';
    char buf[32];
    for (std::size_t r = 0; r < clusters.centroids.rows(); ++r) {
        out << "centroid";
        for (std::size_t c = 0; c < clusters.centroids.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", clusters.centroids(r, c));
            out << ' ' << buf;
        }
        out << '\n';
    }
}

Checkpoint read_checkpoint(const std::filesystem::path& dir) {
    Checkpoint ck;
    ck.params = read_params_f64(dir / "params.f64");
    ck.config = apply_key_values(TrainingConfig{}, read_key_values(dir / "config"));

    const auto path = dir / "clusters";
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line, tag;
    std::vector<std::vector<double>> centroids;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        if (!(ls >> tag)) continue;
        if (tag == "k") {
            ls >> ck.clusters.k;
        } else if (tag == "assignments") {
            std::size_t a;
            while (ls >> a) ck.clusters.assignments.push_back(a);
        } else if (tag == "centroid") {
            std::vector<double> row;
            double v;
            while (ls >> v) row.push_back(v);
            if (!centroids.empty() && row.size() != centroids.front().size()) {
                throw DataError(path.string(), line_no, "centroid width differs from the first centroid");
            }
            centroids.push_back(std::move(row));
        } else {
            throw DataError(path.string(), line_no, "unknown entry '" + tag + "'");
        }
    }
    if (centroids.size() != ck.clusters.k) throw DataError(path.string() + ": centroid count differs from k");
    if (!centroids.empty()) {
        ck.clusters.centroids = DenseMatrix(centroids.size(), centroids.front().size());
        for (std::size_t r = 0; r < centroids.size(); ++r)
            for (std::size_t c = 0; c < centroids[r].size(); ++c) ck.clusters.centroids(r, c) = centroids[r][c];
    }
    return ck;
}

}  // namespace gad
