#include "gad/graph/folds.hpp"

#include <algorithm>
#include <cmath>

#include "gad/errors.hpp"
#include "gad/numeric/rng.hpp"

namespace gad {

FoldPlan stratified_kfold(const LabelSet& labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("stratified_kfold: k must be at least 2, got " + std::to_string(k));
    std::vector<NodeId> by_class[2];
    for (const auto& [user, y] : labels.entries()) by_class[y].push_back(user);
    if (by_class[0].size() < k || by_class[1].size() < k) {
        throw DataError("stratified_kfold: each class needs at least k=" + std::to_string(k) +
                        " members (negatives=" + std::to_string(by_class[0].size()) +
                        ", positives=" + std::to_string(by_class[1].size()) + ")");
    }

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.folds.resize(k);
    Rng rng(seed);
    // Continue the round-robin across classes so fold sizes also stay balanced.
    std::size_t next = 0;
    for (auto& members : by_class) {
        rng.shuffle(members);
        for (NodeId u : members) {
            plan.folds[next].test.push_back(u);
            next = (next + 1) % k;
        }
    }
    for (std::size_t f = 0; f < k; ++f) {
        auto& fold = plan.folds[f];
        std::sort(fold.test.begin(), fold.test.end());
        for (std::size_t g = 0; g < k; ++g)
            if (g != f) fold.train.insert(fold.train.end(), plan.folds[g].test.begin(), plan.folds[g].test.end());
        std::sort(fold.train.begin(), fold.train.end());
    }
    return plan;
}

HoldoutSplit stratified_holdout(const LabelSet& labels, const std::vector<NodeId>& users, double fraction,
                                std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("stratified_holdout: fraction must lie in (0,1)");
    std::vector<NodeId> by_class[2];
    for (NodeId u : users) {
        auto y = labels.label_of(u);
        if (!y) throw DataError("stratified_holdout: user " + std::to_string(u) + " has no label");
        by_class[*y].push_back(u);
    }
    HoldoutSplit split;
    Rng rng(seed);
    for (auto& members : by_class) {
        rng.shuffle(members);
        std::size_t take = std::size_t(std::llround(fraction * double(members.size())));
        if (take == 0 && members.size() >= 2) take = 1;
        if (take >= members.size() && !members.empty()) take = members.size() - 1;
        split.holdout.insert(split.holdout.end(), members.begin(), members.begin() + std::ptrdiff_t(take));
        split.fit.insert(split.fit.end(), members.begin() + std::ptrdiff_t(take), members.end());
    }
    std::sort(split.fit.begin(), split.fit.end());
    std::sort(split.holdout.begin(), split.holdout.end());
    return split;
}

}  // namespace gad
