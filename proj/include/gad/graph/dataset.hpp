#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "gad/graph/bipartite.hpp"
#include "gad/graph/features.hpp"

namespace gad {

/// A featurized, labeled user/object graph ready for training.
struct Dataset {
    std::string name;
    BipartiteGraph graph;
    LabelSet labels;
    NodeFeatures features;
};

/// Bundle layout: graph.edges, graph.labels, features.f64, meta.
///
/// features.f64 is little-endian: 8-byte magic "GADFEAT1", uint32 rows, uint32 cols,
/// then rows×cols float64 values in row-major order.
/// meta is plain text, one key=value per line, sorted by key.
void write_bundle(const std::filesystem::path& dir, const Dataset& dataset);
Dataset read_bundle(const std::filesystem::path& dir);

void write_features_f64(const std::filesystem::path& path, const DenseMatrix& x);
DenseMatrix read_features_f64(const std::filesystem::path& path);

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);
void write_key_values(const std::filesystem::path& path, const std::map<std::string, std::string>& kv);

/// Planted-anomaly benchmark: normal users pick objects mostly inside their own
/// community; anomalous users attach uniformly at random and carry a shifted feature mean.
struct PlantedAnomalyOptions {
    std::size_t users = 500;
    std::size_t objects = 50;
    double anomaly_fraction = 0.05;
    std::size_t communities = 5;
    std::size_t min_degree = 3;
    std::size_t max_degree = 8;
    double in_community_prob = 0.9;
    std::size_t feature_dim = 64;
    /// Added to every feature of an anomalous user before standardization.
    double feature_shift = 0.5;
};

Dataset make_planted_anomaly_dataset(const PlantedAnomalyOptions& options, std::uint64_t seed);

}  // namespace gad
