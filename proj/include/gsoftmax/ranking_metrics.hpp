#ifndef GSOFTMAX_RANKING_METRICS_HPP
#define GSOFTMAX_RANKING_METRICS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace gsoftmax {

struct ScoredItem {
    double score = 0.0;
    bool relevant = false;
};

/// Average precision of one ranked list: items are sorted by descending score
/// (ties broken stably by original position) and AP is the mean of the
/// precision at each relevant rank. Requires at least one relevant item.
double average_precision(std::span<const ScoredItem> items);

/// Scored items per class over a common item set.
struct RankedPredictions {
    std::vector<std::vector<ScoredItem>> per_class;
};

struct ApSummary {
    /// AP per class; NaN for classes without relevant items.
    std::vector<double> per_class_ap;
    /// Classes excluded from the mean because they had no relevant item.
    std::vector<std::size_t> excluded_classes;
    double mean = 0.0;
};

/// Unweighted mean AP over classes that have at least one relevant item.
/// Throws std::domain_error if no class qualifies.
ApSummary mean_average_precision(const RankedPredictions& ranked);

/// Per-class prediction counts: correct positives, predicted positives,
/// ground-truth positives.
struct ConfusionCounts {
    std::vector<long> correct;   // N_c
    std::vector<long> predicted; // N_p
    std::vector<long> actual;    // N_g

    std::size_t num_classes() const { return correct.size(); }
    void validate() const;
};

/// How classes with zero predicted (or zero ground-truth) positives enter the
/// per-class averages: count their precision/recall as 0, or drop them.
enum class ZeroDenominatorPolicy { count_as_zero, skip };

struct PrfMetrics {
    double class_precision = 0.0;
    double class_recall = 0.0;
    double class_f1 = 0.0;
    double overall_precision = 0.0;
    double overall_recall = 0.0;
    double overall_f1 = 0.0;
};

/// Per-class-averaged and overall (count-summed) precision/recall/F1.
/// Throws std::domain_error when every count is zero.
PrfMetrics prf_metrics(const ConfusionCounts& counts,
                       ZeroDenominatorPolicy policy = ZeroDenominatorPolicy::count_as_zero);

/// Threshold per-item class probabilities (rows = items, cols = classes)
/// against the ground-truth label matrix and accumulate confusion counts.
/// Requires probabilities in [0, 1] and threshold strictly inside (0, 1).
ConfusionCounts binarize_predictions(
    const std::vector<std::vector<double>>& probs,
    const std::vector<std::vector<int>>& labels, double threshold);

} // namespace gsoftmax

#endif
