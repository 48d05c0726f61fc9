#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gad/numeric/matrix.hpp"

namespace gad {

using NodeId = std::uint32_t;

enum class AggregateMode { sum, mean };

/// Symmetric neighbor lists in CSR form. Lists are sorted and deduplicated;
/// self-loops are never stored.
class SparseAdjacency {
public:
    SparseAdjacency() = default;

    /// Builds from undirected edges. Duplicates and reversed duplicates collapse;
    /// self-loops are dropped. Throws DataError on an index >= num_nodes.
    static SparseAdjacency from_edges(std::size_t num_nodes,
                                      std::span<const std::pair<NodeId, NodeId>> edges);

    std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    /// Number of undirected edges.
    std::size_t num_edges() const noexcept { return neighbors_.size() / 2; }

    std::span<const NodeId> neighbors(std::size_t v) const {
        return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(std::size_t u, std::size_t v) const;

    /// Same graph with node v renamed to perm[v].
    SparseAdjacency permuted(std::span<const std::size_t> perm) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> neighbors_;
};

/// Row v = sum (or mean) of h over N(v), optionally including v itself.
/// Mean over an empty set is the zero row.
DenseMatrix aggregate_neighbors(const SparseAdjacency& adj, const DenseMatrix& h, AggregateMode mode,
                                bool include_self = false);

}  // namespace gad
