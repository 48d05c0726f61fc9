#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gad {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    /// TP / CP; 0 when there are no real positives.
    double tpr() const noexcept { return tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn); }
    /// FP / CN; 0 when there are no real negatives.
    double fpr() const noexcept { return fp + tn == 0 ? 0.0 : double(fp) / double(fp + tn); }

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;
};

/// Mann-Whitney AUC: (concordant pairs + ½ tied pairs) / (positives × negatives),
/// computed from average ranks in O(n log n). Labels are 0/1.
/// Throws std::invalid_argument on length mismatch or when a class is absent.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Predicted positive iff score >= threshold.
ConfusionCounts confusion_at_threshold(std::span<const double> scores, std::span<const int> labels, double threshold);

/// ROC points from (0,0) to (1,1), one per distinct score (descending thresholds).
std::vector<RocPoint> tpr_fpr_curve(std::span<const double> scores, std::span<const int> labels);

/// Trapezoidal area under a curve from tpr_fpr_curve.
double curve_area(std::span<const RocPoint> curve);

}  // namespace gad
