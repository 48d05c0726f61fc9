#include "gad/graph/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "gad/errors.hpp"
#include "gad/numeric/rng.hpp"

namespace gad {

std::string to_string(FeatureScheme scheme) {
    return scheme == FeatureScheme::pseudo_random ? "pseudo_random" : "degree_structural";
}

FeatureScheme parse_feature_scheme(const std::string& s) {
    if (s == "pseudo_random") return FeatureScheme::pseudo_random;
    if (s == "degree_structural") return FeatureScheme::degree_structural;
    throw ConfigError("unknown feature scheme '" + s + "' (expected pseudo_random or degree_structural)");
}

namespace {

constexpr std::size_t kStructuralStats = 8;

std::vector<std::array<double, kStructuralStats>> structural_stats(const SparseAdjacency& adj,
                                                                    const BipartiteGraph& graph) {
    const std::size_t n = adj.num_nodes();
    std::vector<std::array<double, kStructuralStats>> stats(n);
    std::vector<std::size_t> mark(n, std::size_t(-1));
    for (std::size_t v = 0; v < n; ++v) {
        const double deg = double(adj.degree(v));
        double sum_nb = 0.0, max_nb = 0.0, min_nb = 0.0;
        bool first = true;
        std::size_t two_hop = 0;
        mark[v] = v;
        for (NodeId u : adj.neighbors(v)) {
            const double du = double(adj.degree(u));
            sum_nb += du;
            max_nb = first ? du : std::max(max_nb, du);
            min_nb = first ? du : std::min(min_nb, du);
            first = false;
            for (NodeId w : adj.neighbors(u)) {
                if (mark[w] != v) {
                    mark[w] = v;
                    ++two_hop;
                }
            }
        }
        const double mean_nb = deg > 0.0 ? sum_nb / deg : 0.0;
        stats[v] = {deg,
                    std::log1p(deg),
                    mean_nb,
                    max_nb,
                    min_nb,
                    double(two_hop),
                    std::log1p(double(two_hop)),
                    graph.is_user(v) ? 1.0 : 0.0};
    }
    return stats;
}

}  // namespace

NodeFeatures generate_features(const BipartiteGraph& graph, std::size_t dim, std::uint64_t seed,
                               FeatureScheme scheme) {
    if (dim == 0) throw ConfigError("generate_features: dim must be at least 1");
    const std::size_t n = graph.num_nodes();
    NodeFeatures f;
    f.x = DenseMatrix(n, dim);
    f.seed = seed;
    f.scheme = scheme;
    if (scheme == FeatureScheme::pseudo_random) {
        const std::uint64_t key = derive_seed(seed, "features.pseudo_random");
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t c = 0; c < dim; ++c) f.x(v, c) = counter_normal(key, std::uint64_t(v) * dim + c);
        return f;
    }
    const auto stats = structural_stats(graph.adjacency(), graph);
    const std::uint64_t key = derive_seed(seed, "features.projection");
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t c = 0; c < dim; ++c) {
            if (c < kStructuralStats) {
                f.x(v, c) = stats[v][c];
                continue;
            }
            double acc = 0.0;
            for (std::size_t b = 0; b < kStructuralStats; ++b)
                acc += counter_normal(key, std::uint64_t(c) * kStructuralStats + b) * stats[v][b];
            f.x(v, c) = acc;
        }
    }
    return f;
}

DenseMatrix standardize_columns(const DenseMatrix& x) {
    if (x.rows() < 2) throw ShapeError("standardize_columns: need at least 2 rows, got " + x.shape_string());
    DenseMatrix out = x;
    const double n = double(x.rows());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) mean += x(r, c);
        mean /= n;
        double var = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            const double d = x(r, c) - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / n);
        const bool constant = sd <= 1e-12 * std::max(1.0, std::abs(mean));
        for (std::size_t r = 0; r < x.rows(); ++r) out(r, c) = constant ? 0.0 : (x(r, c) - mean) / sd;
    }
    return out;
}

NodeFeatures standardize_features(NodeFeatures features) {
    features.x = standardize_columns(features.x);
    features.standardized = true;
    return features;
}

}  // namespace gad
