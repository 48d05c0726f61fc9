#include "gad/ssl/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gad/errors.hpp"
#include "gad/numeric/rng.hpp"

namespace gad {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

DenseMatrix plus_plus_seeds(const DenseMatrix& points, std::size_t k, Rng& rng) {
    const std::size_t n = points.rows();
    DenseMatrix centroids(k, points.cols());
    std::vector<char> chosen(n, 0);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::size_t pick = rng.below(n);
    for (std::size_t c = 0; c < k; ++c) {
        if (c > 0) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) total += best[i];
            if (total > 0.0) {
                double target = rng.uniform() * total;
                pick = n;
                for (std::size_t i = 0; i < n; ++i) {
                    if (best[i] <= 0.0) continue;
                    pick = i;
                    target -= best[i];
                    if (target < 0.0) break;
                }
            } else {
                // All remaining points coincide with a seed; take any unchosen one.
                std::vector<std::size_t> free;
                for (std::size_t i = 0; i < n; ++i)
                    if (!chosen[i]) free.push_back(i);
                pick = free[rng.below(free.size())];
            }
        }
        chosen[pick] = 1;
        std::copy_n(points.row(pick).data(), points.cols(), centroids.row(c).data());
        for (std::size_t i = 0; i < n; ++i)
            best[i] = std::min(best[i], squared_distance(points.row(i), centroids.row(c)));
    }
    return centroids;
}

void assign(const DenseMatrix& points, const DenseMatrix& centroids, std::vector<std::size_t>& assignments) {
    for (std::size_t i = 0; i < points.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t c = 0; c < centroids.rows(); ++c) {
            const double d = squared_distance(points.row(i), centroids.row(c));
            if (d < best) {
                best = d;
                arg = c;
            }
        }
        assignments[i] = arg;
    }
}

void repair_empty(const DenseMatrix& points, DenseMatrix& centroids, std::vector<std::size_t>& assignments) {
    const std::size_t k = centroids.rows();
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t a : assignments) ++counts[a];
    for (std::size_t empty = 0; empty < k; ++empty) {
        if (counts[empty] > 0) continue;
        double worst = -1.0;
        std::size_t victim = 0;
        for (std::size_t i = 0; i < points.rows(); ++i) {
            if (counts[assignments[i]] < 2) continue;
            const double d = squared_distance(points.row(i), centroids.row(assignments[i]));
            if (d > worst) {
                worst = d;
                victim = i;
            }
        }
        --counts[assignments[victim]];
        assignments[victim] = empty;
        counts[empty] = 1;
        std::copy_n(points.row(victim).data(), points.cols(), centroids.row(empty).data());
    }
}

DenseMatrix cluster_means(const DenseMatrix& points, const std::vector<std::size_t>& assignments, std::size_t k) {
    DenseMatrix means(k, points.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        auto dst = means.row(assignments[i]);
        auto src = points.row(i);
        for (std::size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
        ++counts[assignments[i]];
    }
    for (std::size_t c = 0; c < k; ++c)
        for (double& v : means.row(c)) v /= double(counts[c]);
    return means;
}

}  // namespace

std::vector<std::vector<std::size_t>> ClusterState::members() const {
    std::vector<std::vector<std::size_t>> out(k);
    for (std::size_t i = 0; i < assignments.size(); ++i) out[assignments[i]].push_back(i);
    return out;
}

double kmeans_inertia(const DenseMatrix& points, const std::vector<std::size_t>& assignments,
                      const DenseMatrix& centroids) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i)
        total += squared_distance(points.row(i), centroids.row(assignments[i]));
    return total;
}

ClusterState kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
    if (k == 0) throw ConfigError("kmeans: K must be at least 1");
    if (k > points.rows()) {
        throw ConfigError("kmeans: K=" + std::to_string(k) + " exceeds the number of points " +
                          std::to_string(points.rows()));
    }
    if (!points.all_finite()) throw NumericalError("kmeans: non-finite input points");

    Rng rng(seed);
    ClusterState state;
    state.k = k;
    state.centroids = plus_plus_seeds(points, k, rng);
    state.assignments.assign(points.rows(), 0);
    assign(points, state.centroids, state.assignments);
    repair_empty(points, state.centroids, state.assignments);
    state.inertia_history.push_back(kmeans_inertia(points, state.assignments, state.centroids));

    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        DenseMatrix updated = cluster_means(points, state.assignments, k);
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            shift = std::max(shift, std::sqrt(squared_distance(updated.row(c), state.centroids.row(c))));
        state.centroids = std::move(updated);
        assign(points, state.centroids, state.assignments);
        repair_empty(points, state.centroids, state.assignments);
        state.inertia_history.push_back(kmeans_inertia(points, state.assignments, state.centroids));
        state.iterations = it;
        if (shift < options.tolerance) break;
    }
    return state;
}

}  // namespace gad
