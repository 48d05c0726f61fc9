#include "gad/graph/bipartite.hpp"

#include <algorithm>
#include <cstdio>

#include "gad/errors.hpp"

namespace gad {

BipartiteGraph BipartiteGraph::build(std::size_t num_users, std::size_t num_objects,
                                     std::vector<std::pair<NodeId, NodeId>> edges) {
    const std::size_t n = num_users + num_objects;
    for (const auto& [u, o] : edges) {
        if (u >= num_users) {
            throw DataError("BipartiteGraph::build: user id " + std::to_string(u) + " outside [0, " +
                            std::to_string(num_users) + ")");
        }
        if (o < num_users || o >= n) {
            throw DataError("BipartiteGraph::build: object id " + std::to_string(o) + " outside [" +
                            std::to_string(num_users) + ", " + std::to_string(n) + ")");
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    BipartiteGraph g;
    g.num_users_ = num_users;
    g.num_objects_ = num_objects;
    g.adjacency_ = SparseAdjacency::from_edges(n, edges);
    g.edges_ = std::move(edges);
    return g;
}

LabelSet::LabelSet(std::vector<std::pair<NodeId, int>> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].second != 0 && entries_[i].second != 1) {
            throw DataError("LabelSet: label " + std::to_string(entries_[i].second) + " for user " +
                            std::to_string(entries_[i].first) + " is not 0 or 1");
        }
        if (i > 0 && entries_[i].first == entries_[i - 1].first) {
            throw DataError("LabelSet: duplicate label for user " + std::to_string(entries_[i].first));
        }
    }
}

std::optional<int> LabelSet::label_of(NodeId user) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair<NodeId, int>{user, -1});
    if (it == entries_.end() || it->first != user) return std::nullopt;
    return it->second;
}

std::size_t LabelSet::positives() const noexcept {
    return std::size_t(std::count_if(entries_.begin(), entries_.end(), [](const auto& e) { return e.second == 1; }));
}

DatasetStats dataset_stats(const BipartiteGraph& graph, const LabelSet& labels) {
    DatasetStats s;
    s.users = graph.num_users();
    s.objects = graph.num_objects();
    s.nodes = graph.num_nodes();
    s.edges = graph.num_edges();
    s.labeled = labels.size();
    s.abnormal = labels.positives();
    if (s.labeled > 0) {
        s.abnormal_pct = 100.0 * double(s.abnormal) / double(s.labeled);
        s.normal_pct = 100.0 - s.abnormal_pct;
    }
    return s;
}

namespace {

std::string with_commas(std::size_t v) {
    std::string digits = std::to_string(v);
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
        out.push_back(digits[i]);
    }
    return out;
}

}  // namespace

std::string format_stats_row(const std::string& name, const DatasetStats& stats) {
    char pct[64];
    std::snprintf(pct, sizeof pct, " (%.2f%%, %.2f%%)", stats.normal_pct, stats.abnormal_pct);
    return name + " & " + with_commas(stats.users) + pct + " & " + with_commas(stats.objects) + " & " +
           with_commas(stats.nodes) + " & " + with_commas(stats.edges);
}

}  // namespace gad
