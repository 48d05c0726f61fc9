#pragma once

// Helpers shared by the unit and acceptance tests: random instances and a
// central-difference gradient checker that works on any ParameterStore.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gad/graph/bipartite.hpp"
#include "gad/numeric/params.hpp"
#include "gad/numeric/tape.hpp"

namespace gad::testing {

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, scale);
    DenseMatrix m(rows, cols);
    for (double& v : m.values()) v = dist(gen);
    return m;
}

/// Every user gets at least one object; the rest of the edges are uniform.
inline BipartiteGraph random_bipartite(std::size_t users, std::size_t objects, std::size_t extra_edges,
                                       std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::size_t> pick_user(0, users - 1), pick_object(0, objects - 1);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t u = 0; u < users; ++u) edges.emplace_back(NodeId(u), NodeId(users + pick_object(gen)));
    for (std::size_t e = 0; e < extra_edges; ++e)
        edges.emplace_back(NodeId(pick_user(gen)), NodeId(users + pick_object(gen)));
    return BipartiteGraph::build(users, objects, std::move(edges));
}

/// Random undirected graph on n nodes (no bipartite constraint).
inline SparseAdjacency random_graph(std::size_t n, double density, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::bernoulli_distribution coin(density);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(gen)) edges.emplace_back(NodeId(i), NodeId(j));
    return SparseAdjacency::from_edges(n, edges);
}

/// Replaces every parameter value with N(0, scale²) draws. Zero-initialized biases can
/// park a ReLU exactly on its kink, where central differences and the tape disagree.
inline ParameterStore randomized(const ParameterStore& store, std::uint64_t seed, double scale = 0.5) {
    ParameterStore out;
    std::uint64_t i = 0;
    for (const auto& name : store.names()) {
        const DenseMatrix& v = store.get(name);
        out.add(name, random_matrix(v.rows(), v.cols(), seed + 7919 * ++i, scale));
    }
    return out;
}

struct GradientCheck {
    std::string name;
    double relative_error = 0.0;
};

using LossBuilder = std::function<Var(Tape&, const ParameterStore&)>;

/// Compares tape gradients with central differences, one relative error per tensor:
/// ||analytic − numeric|| / max(||analytic||, ||numeric||, 1e-8).
inline std::vector<GradientCheck> check_gradients(ParameterStore store, const LossBuilder& loss_fn,
                                                  double step = 1e-4) {
    GradientRecord analytic;
    {
        Tape tape;
        analytic = tape.backward(loss_fn(tape, store));
    }
    auto eval = [&](const ParameterStore& s) {
        Tape tape;
        return loss_fn(tape, s).value()(0, 0);
    };
    std::vector<GradientCheck> out;
    for (const auto& name : store.names()) {
        DenseMatrix numeric(store.get(name).rows(), store.get(name).cols());
        for (std::size_t i = 0; i < numeric.size(); ++i) {
            const double orig = store.get(name).values()[i];
            store.value(name).values()[i] = orig + step;
            const double up = eval(store);
            store.value(name).values()[i] = orig - step;
            const double down = eval(store);
            store.value(name).values()[i] = orig;
            numeric.values()[i] = (up - down) / (2.0 * step);
        }
        const auto it = analytic.find(name);
        const DenseMatrix a = it == analytic.end() ? DenseMatrix(numeric.rows(), numeric.cols()) : it->second;
        const double denom = std::max({frobenius_norm(a), frobenius_norm(numeric), 1e-8});
        out.push_back({name, frobenius_norm(a - numeric) / denom});
    }
    return out;
}

inline double worst(const std::vector<GradientCheck>& checks) {
    double w = 0.0;
    for (const auto& c : checks) w = std::max(w, c.relative_error);
    return w;
}

/// AUC by explicit pair counting: concordant pairs count 1, ties ½.
inline double brute_force_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    double num = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            pairs += 1.0;
            if (scores[i] > scores[j]) num += 1.0;
            else if (scores[i] == scores[j]) num += 0.5;
        }
    }
    return num / pairs;
}

}  // namespace gad::testing
