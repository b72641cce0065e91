#include "gsoftmax/ranking_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gsoftmax {

double average_precision(std::span<const ScoredItem> items) {
    std::size_t num_relevant = 0;
    for (const ScoredItem& it : items) {
        if (!std::isfinite(it.score)) {
            throw std::domain_error("average_precision: non-finite score");
        }
        if (it.relevant) ++num_relevant;
    }
    if (num_relevant == 0) {
        throw std::domain_error("average_precision: no relevant items");
    }
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return items[a].score > items[b].score;
    });
    double hits = 0.0;
    double sum_prec = 0.0;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        if (items[order[rank]].relevant) {
            hits += 1.0;
            sum_prec += hits / static_cast<double>(rank + 1);
        }
    }
    return sum_prec / static_cast<double>(num_relevant);
}

ApSummary mean_average_precision(const RankedPredictions& ranked) {
    ApSummary out;
    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t c = 0; c < ranked.per_class.size(); ++c) {
        const auto& items = ranked.per_class[c];
        const bool has_relevant =
            std::any_of(items.begin(), items.end(), [](const ScoredItem& it) {
                return it.relevant;
            });
        if (!has_relevant) {
            out.per_class_ap.push_back(std::numeric_limits<double>::quiet_NaN());
            out.excluded_classes.push_back(c);
            continue;
        }
        const double ap = average_precision(items);
        out.per_class_ap.push_back(ap);
        sum += ap;
        ++counted;
    }
    if (counted == 0) {
        throw std::domain_error("mean_average_precision: no class with relevant items");
    }
    out.mean = sum / static_cast<double>(counted);
    return out;
}

void ConfusionCounts::validate() const {
    if (correct.size() != predicted.size() || correct.size() != actual.size()) {
        throw std::invalid_argument("ConfusionCounts: per-class arrays differ in length");
    }
    for (std::size_t i = 0; i < correct.size(); ++i) {
        if (correct[i] < 0 || predicted[i] < 0 || actual[i] < 0 ||
            correct[i] > std::min(predicted[i], actual[i])) {
            throw std::domain_error("ConfusionCounts: inconsistent counts for class " +
                                    std::to_string(i));
        }
    }
}

PrfMetrics prf_metrics(const ConfusionCounts& counts, ZeroDenominatorPolicy policy) {
    counts.validate();
    const std::size_t m = counts.num_classes();
    if (m == 0) {
        throw std::domain_error("prf_metrics: no classes");
    }
    long total_c = 0, total_p = 0, total_g = 0;
    double prec_sum = 0.0, rec_sum = 0.0;
    std::size_t prec_n = 0, rec_n = 0;
    bool any_nonzero = false;
    for (std::size_t i = 0; i < m; ++i) {
        any_nonzero = any_nonzero || counts.correct[i] > 0 || counts.predicted[i] > 0 ||
                      counts.actual[i] > 0;
        total_c += counts.correct[i];
        total_p += counts.predicted[i];
        total_g += counts.actual[i];
        if (counts.predicted[i] > 0) {
            prec_sum += static_cast<double>(counts.correct[i]) /
                        static_cast<double>(counts.predicted[i]);
            ++prec_n;
        } else if (policy == ZeroDenominatorPolicy::count_as_zero) {
            ++prec_n; // contributes 0
        }
        if (counts.actual[i] > 0) {
            rec_sum += static_cast<double>(counts.correct[i]) /
                       static_cast<double>(counts.actual[i]);
            ++rec_n;
        } else if (policy == ZeroDenominatorPolicy::count_as_zero) {
            ++rec_n;
        }
    }
    if (!any_nonzero) {
        throw std::domain_error("prf_metrics: all counts are zero");
    }
    auto f1 = [](double p, double r) {
        return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    };
    PrfMetrics out;
    out.class_precision = prec_n > 0 ? prec_sum / static_cast<double>(prec_n) : 0.0;
    out.class_recall = rec_n > 0 ? rec_sum / static_cast<double>(rec_n) : 0.0;
    out.class_f1 = f1(out.class_precision, out.class_recall);
    out.overall_precision =
        total_p > 0 ? static_cast<double>(total_c) / static_cast<double>(total_p) : 0.0;
    out.overall_recall =
        total_g > 0 ? static_cast<double>(total_c) / static_cast<double>(total_g) : 0.0;
    out.overall_f1 = f1(out.overall_precision, out.overall_recall);
    return out;
}

ConfusionCounts binarize_predictions(const std::vector<std::vector<double>>& probs,
                                     const std::vector<std::vector<int>>& labels,
                                     double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw std::domain_error("binarize_predictions: threshold must be in (0, 1)");
    }
    if (probs.size() != labels.size()) {
        throw std::invalid_argument("binarize_predictions: item count mismatch");
    }
    if (probs.empty()) {
        throw std::domain_error("binarize_predictions: no items");
    }
    const std::size_t m = probs.front().size();
    ConfusionCounts counts;
    counts.correct.assign(m, 0);
    counts.predicted.assign(m, 0);
    counts.actual.assign(m, 0);
    for (std::size_t r = 0; r < probs.size(); ++r) {
        if (probs[r].size() != m || labels[r].size() != m) {
            throw std::invalid_argument("binarize_predictions: ragged rows");
        }
        for (std::size_t c = 0; c < m; ++c) {
            const double p = probs[r][c];
            if (!(p >= 0.0 && p <= 1.0)) {
                throw std::domain_error("binarize_predictions: probability outside [0, 1]");
            }
            const bool predicted = p >= threshold;
            const bool actual = labels[r][c] != 0;
            if (predicted) ++counts.predicted[c];
            if (actual) ++counts.actual[c];
            if (predicted && actual) ++counts.correct[c];
        }
    }
    return counts;
}

} // namespace gsoftmax
