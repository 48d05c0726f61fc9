#pragma once

#include <cstdint>
#include <vector>

#include "gad/graph/bipartite.hpp"

namespace gad {

struct Fold {
    std::vector<NodeId> train;
    std::vector<NodeId> test;
};

struct FoldPlan {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<Fold> folds;
};

/// Stratified k-fold split of the labeled users. Each class is shuffled with the
/// seed and dealt round-robin across folds, so every fold holds within one member
/// of its share of each class. Throws ConfigError when k < 2 and DataError when a
/// class has fewer than k members.
FoldPlan stratified_kfold(const LabelSet& labels, std::size_t k, std::uint64_t seed);

struct HoldoutSplit {
    std::vector<NodeId> fit;
    std::vector<NodeId> holdout;
};

/// Carves round(fraction·count) members of each class (at least one when the class
/// has two or more members) out of users into the holdout part.
HoldoutSplit stratified_holdout(const LabelSet& labels, const std::vector<NodeId>& users, double fraction,
                                std::uint64_t seed);

}  // namespace gad
