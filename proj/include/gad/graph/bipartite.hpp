#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gad/numeric/matrix.hpp"
#include "gad/numeric/sparse.hpp"

namespace gad {

/// Users occupy node ids [0, U), objects [U, U+O). Edges only join a user to an object.
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    /// Validates ids, collapses duplicate interactions and builds the symmetric adjacency.
    /// Throws DataError on a user id outside [0,U) or object id outside [U, U+O).
    static BipartiteGraph build(std::size_t num_users, std::size_t num_objects,
                                std::vector<std::pair<NodeId, NodeId>> edges);

    std::size_t num_users() const noexcept { return num_users_; }
    std::size_t num_objects() const noexcept { return num_objects_; }
    std::size_t num_nodes() const noexcept { return num_users_ + num_objects_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    bool is_user(std::size_t node) const noexcept { return node < num_users_; }

    /// Sorted unique (user, object) pairs.
    std::span<const std::pair<NodeId, NodeId>> edges() const noexcept { return edges_; }
    const SparseAdjacency& adjacency() const noexcept { return adjacency_; }

    friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
        return a.num_users_ == b.num_users_ && a.num_objects_ == b.num_objects_ && a.edges_ == b.edges_;
    }

private:
    std::size_t num_users_ = 0;
    std::size_t num_objects_ = 0;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    SparseAdjacency adjacency_;
};

/// Binary user labels (1 = abnormal). Objects are never labeled.
class LabelSet {
public:
    LabelSet() = default;
    /// Entries are sorted by user id; duplicate user ids are rejected.
    explicit LabelSet(std::vector<std::pair<NodeId, int>> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::span<const std::pair<NodeId, int>> entries() const noexcept { return entries_; }
    std::optional<int> label_of(NodeId user) const;

    std::size_t positives() const noexcept;
    std::size_t negatives() const noexcept { return size() - positives(); }

    friend bool operator==(const LabelSet&, const LabelSet&) = default;

private:
    std::vector<std::pair<NodeId, int>> entries_;
};

/// Row counts in the layout of a dataset statistics table.
struct DatasetStats {
    std::size_t users = 0;
    std::size_t objects = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t labeled = 0;
    std::size_t abnormal = 0;
    double normal_pct = 0.0;
    double abnormal_pct = 0.0;
};

DatasetStats dataset_stats(const BipartiteGraph& graph, const LabelSet& labels);

/// "3,286 (61.21%, 38.79%)" style summary line.
std::string format_stats_row(const std::string& name, const DatasetStats& stats);

}  // namespace gad
