#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gad/metrics.hpp"

namespace gad {

namespace {

struct ClassCounts {
    std::size_t pos = 0;
    std::size_t neg = 0;
};

ClassCounts check_inputs(std::span<const double> scores, std::span<const int> labels, const char* where) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument(std::string(where) + ": " + std::to_string(scores.size()) + " scores but " +
                                    std::to_string(labels.size()) + " labels");
    }
    ClassCounts c;
    for (int y : labels) {
        if (y == 1) {
            ++c.pos;
        } else if (y == 0) {
            ++c.neg;
        } else {
            throw std::invalid_argument(std::string(where) + ": labels must be 0 or 1");
        }
    }
    return c;
}

std::vector<std::size_t> order_by_score(std::span<const double> scores, bool descending) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return descending ? scores[a] > scores[b] : scores[a] < scores[b];
    });
    return idx;
}

}  // namespace

double auc(std::span<const double> scores, std::span<const int> labels) {
    const ClassCounts c = check_inputs(scores, labels, "auc");
    if (c.pos == 0 || c.neg == 0) throw std::invalid_argument("auc: undefined unless both classes are present");
    const auto idx = order_by_score(scores, false);
    // Ranks are 1-based; a tie group spanning ranks [i+1, j] gets their average. Work
    // in doubled ranks so every quantity stays an exact integer.
    double doubled_rank_sum = 0.0;
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
        const double doubled_avg = double(i + 1 + j);
        for (std::size_t t = i; t < j; ++t)
            if (labels[idx[t]] == 1) doubled_rank_sum += doubled_avg;
        i = j;
    }
    const double p = double(c.pos);
    const double n = double(c.neg);
    // U = R_pos − P(P+1)/2
    const double doubled_u = doubled_rank_sum - p * (p + 1.0);
    return doubled_u / (2.0 * p * n);
}

ConfusionCounts confusion_at_threshold(std::span<const double> scores, std::span<const int> labels, double threshold) {
    check_inputs(scores, labels, "confusion_at_threshold");
    ConfusionCounts c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] >= threshold;
        if (labels[i] == 1) {
            predicted ? ++c.tp : ++c.fn;
        } else {
            predicted ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

std::vector<RocPoint> tpr_fpr_curve(std::span<const double> scores, std::span<const int> labels) {
    const ClassCounts c = check_inputs(scores, labels, "tpr_fpr_curve");
    if (c.pos == 0 || c.neg == 0) throw std::invalid_argument("tpr_fpr_curve: both classes must be present");
    const auto idx = order_by_score(scores, true);
    std::vector<RocPoint> curve;
    curve.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < idx.size();) {
        const double s = scores[idx[i]];
        while (i < idx.size() && scores[idx[i]] == s) {
            labels[idx[i]] == 1 ? ++tp : ++fp;
            ++i;
        }
        curve.push_back({double(fp) / double(c.neg), double(tp) / double(c.pos), s});
    }
    return curve;
}

double curve_area(std::span<const RocPoint> curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) * 0.5;
    return area;
}

}  // namespace gad
