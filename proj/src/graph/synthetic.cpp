#include <algorithm>
#include <cmath>

#include "gad/errors.hpp"
#include "gad/graph/dataset.hpp"
#include "gad/numeric/rng.hpp"

namespace gad {

Dataset make_planted_anomaly_dataset(const PlantedAnomalyOptions& options, std::uint64_t seed) {
    if (options.users < 2 || options.objects < 1 || options.communities < 1 ||
        options.communities > options.objects || options.min_degree < 1 || options.max_degree < options.min_degree ||
        options.max_degree > options.objects || options.feature_dim < 1) {
        throw ConfigError("make_planted_anomaly_dataset: inconsistent options");
    }
    Rng rng(derive_seed(seed, "synthetic.structure"));
    const std::size_t num_anomalies =
        std::clamp<std::size_t>(std::size_t(std::llround(options.anomaly_fraction * double(options.users))), 1,
                                options.users - 1);

    std::vector<NodeId> order(options.users);
    for (std::size_t u = 0; u < options.users; ++u) order[u] = NodeId(u);
    rng.shuffle(order);
    std::vector<int> is_anomaly(options.users, 0);
    for (std::size_t i = 0; i < num_anomalies; ++i) is_anomaly[order[i]] = 1;

    // Objects are split into contiguous community blocks.
    std::vector<std::vector<NodeId>> community_objects(options.communities);
    for (std::size_t o = 0; o < options.objects; ++o)
        community_objects[o * options.communities / options.objects].push_back(NodeId(options.users + o));

    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<NodeId> picked;
    for (std::size_t u = 0; u < options.users; ++u) {
        const std::size_t degree = options.min_degree + rng.below(options.max_degree - options.min_degree + 1);
        const auto& home = community_objects[rng.below(options.communities)];
        picked.clear();
        while (picked.size() < degree) {
            NodeId o;
            if (!is_anomaly[u] && rng.uniform() < options.in_community_prob) {
                o = home[rng.below(home.size())];
            } else {
                o = NodeId(options.users + rng.below(options.objects));
            }
            if (std::find(picked.begin(), picked.end(), o) != picked.end()) {
                // A small home community can run out of fresh objects.
                if (picked.size() >= home.size()) o = NodeId(options.users + rng.below(options.objects));
                if (std::find(picked.begin(), picked.end(), o) != picked.end()) continue;
            }
            picked.push_back(o);
        }
        for (NodeId o : picked) edges.emplace_back(NodeId(u), o);
    }

    Dataset d;
    d.name = "planted";
    d.graph = BipartiteGraph::build(options.users, options.objects, std::move(edges));
    std::vector<std::pair<NodeId, int>> labels;
    labels.reserve(options.users);
    for (std::size_t u = 0; u < options.users; ++u) labels.emplace_back(NodeId(u), is_anomaly[u]);
    d.labels = LabelSet(std::move(labels));

    const std::size_t n = d.graph.num_nodes();
    DenseMatrix x(n, options.feature_dim);
    const std::uint64_t key = derive_seed(seed, "synthetic.features");
    for (std::size_t v = 0; v < n; ++v) {
        const double shift = (v < options.users && is_anomaly[v]) ? options.feature_shift : 0.0;
        for (std::size_t c = 0; c < options.feature_dim; ++c)
            x(v, c) = counter_normal(key, std::uint64_t(v) * options.feature_dim + c) + shift;
    }
    d.features.x = standardize_columns(x);
    d.features.standardized = true;
    d.features.seed = seed;
    d.features.scheme = FeatureScheme::pseudo_random;
    return d;
}

}  // namespace gad
