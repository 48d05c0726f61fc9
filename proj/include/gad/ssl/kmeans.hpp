#pragma once

#include <cstdint>
#include <vector>

#include "gad/numeric/matrix.hpp"

namespace gad {

struct KMeansOptions {
    std::size_t max_iterations = 100;
    /// Stop once no centroid moves farther than this (Euclidean).
    double tolerance = 1e-4;
};

struct ClusterState {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;  ///< one cluster id per point
    DenseMatrix centroids;                 ///< k × dim
    std::size_t iterations = 0;
    /// Inertia after seeding and after each Lloyd iteration.
    std::vector<double> inertia_history;

    double inertia() const { return inertia_history.empty() ? 0.0 : inertia_history.back(); }
    /// Member indices of each cluster in ascending order.
    std::vector<std::vector<std::size_t>> members() const;
};

/// Lloyd's algorithm from k-means++ seeding. An empty cluster takes the point
/// farthest from its centroid among clusters with more than one member.
/// Throws ConfigError when k == 0 or k exceeds the number of points.
ClusterState kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});

/// Sum of squared distances from each point to its assigned centroid.
double kmeans_inertia(const DenseMatrix& points, const std::vector<std::size_t>& assignments,
                      const DenseMatrix& centroids);

}  // namespace gad
