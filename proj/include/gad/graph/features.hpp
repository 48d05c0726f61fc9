#pragma once

#include <cstdint>
#include <string>

#include "gad/graph/bipartite.hpp"
#include "gad/numeric/matrix.hpp"

namespace gad {

enum class FeatureScheme { pseudo_random, degree_structural };

std::string to_string(FeatureScheme scheme);
FeatureScheme parse_feature_scheme(const std::string& s);

struct NodeFeatures {
    DenseMatrix x;
    bool standardized = false;
    std::uint64_t seed = 0;
    FeatureScheme scheme = FeatureScheme::pseudo_random;
};

/// Deterministic in (graph, dim, seed, scheme).
///  - pseudo_random: standard normals from a counter-based generator keyed by (seed, node, column).
///  - degree_structural: degree, log-degree, neighbor-degree and two-hop statistics in the
///    first columns, fixed random projections of those statistics in the rest.
NodeFeatures generate_features(const BipartiteGraph& graph, std::size_t dim, std::uint64_t seed,
                               FeatureScheme scheme = FeatureScheme::pseudo_random);

/// Per-column z-score with the population standard deviation; constant columns become zero.
/// Requires at least two rows.
DenseMatrix standardize_columns(const DenseMatrix& x);
NodeFeatures standardize_features(NodeFeatures features);

}  // namespace gad
