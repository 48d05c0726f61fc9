#include "gad/numeric/sparse.hpp"

#include <algorithm>
#include <string>

#include "gad/errors.hpp"

namespace gad {

SparseAdjacency SparseAdjacency::from_edges(std::size_t num_nodes,
                                            std::span<const std::pair<NodeId, NodeId>> edges) {
    std::vector<std::size_t> degree(num_nodes, 0);
    for (const auto& [u, v] : edges) {
        if (u >= num_nodes || v >= num_nodes) {
            throw DataError("SparseAdjacency::from_edges: edge (" + std::to_string(u) + ", " +
                            std::to_string(v) + ") out of range for " + std::to_string(num_nodes) +
                            " nodes");
        }
        if (u == v) continue;
        ++degree[u];
        ++degree[v];
    }
    SparseAdjacency adj;
    adj.offsets_.assign(num_nodes + 1, 0);
    for (std::size_t v = 0; v < num_nodes; ++v) adj.offsets_[v + 1] = adj.offsets_[v] + degree[v];
    std::vector<NodeId> raw(adj.offsets_.back());
    std::vector<std::size_t> cursor(adj.offsets_.begin(), adj.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        if (u == v) continue;
        raw[cursor[u]++] = v;
        raw[cursor[v]++] = u;
    }
    // Sort and dedupe each list, then compact.
    std::vector<std::size_t> compact_offsets(num_nodes + 1, 0);
    std::size_t write = 0;
    for (std::size_t v = 0; v < num_nodes; ++v) {
        auto first = raw.begin() + std::ptrdiff_t(adj.offsets_[v]);
        auto last = raw.begin() + std::ptrdiff_t(adj.offsets_[v + 1]);
        std::sort(first, last);
        last = std::unique(first, last);
        for (auto it = first; it != last; ++it) raw[write++] = *it;
        compact_offsets[v + 1] = write;
    }
    raw.resize(write);
    adj.offsets_ = std::move(compact_offsets);
    adj.neighbors_ = std::move(raw);
    return adj;
}

bool SparseAdjacency::has_edge(std::size_t u, std::size_t v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), NodeId(v));
}

SparseAdjacency SparseAdjacency::permuted(std::span<const std::size_t> perm) const {
    const std::size_t n = num_nodes();
    if (perm.size() != n) throw ShapeError("SparseAdjacency::permuted: permutation size mismatch");
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(num_edges());
    for (std::size_t u = 0; u < n; ++u)
        for (NodeId v : neighbors(u))
            if (u < v) edges.emplace_back(NodeId(perm[u]), NodeId(perm[v]));
    return from_edges(n, edges);
}

DenseMatrix aggregate_neighbors(const SparseAdjacency& adj, const DenseMatrix& h, AggregateMode mode,
                                bool include_self) {
    if (h.rows() != adj.num_nodes()) {
        throw ShapeError("aggregate_neighbors: features have " + std::to_string(h.rows()) +
                         " rows but graph has " + std::to_string(adj.num_nodes()) + " nodes");
    }
    const std::size_t d = h.cols();
    DenseMatrix out(h.rows(), d);
    for (std::size_t v = 0; v < adj.num_nodes(); ++v) {
        auto dst = out.row(v);
        if (include_self) {
            auto src = h.row(v);
            for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
        }
        for (NodeId u : adj.neighbors(v)) {
            auto src = h.row(u);
            for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
        }
        if (mode == AggregateMode::mean) {
            const std::size_t count = adj.degree(v) + (include_self ? 1 : 0);
            if (count > 0) {
                const double denom = double(count);
                for (double& x : dst) x /= denom;
            }
        }
    }
    return out;
}

}  // namespace gad
