#ifndef GSOFTMAX_SERIALIZATION_HPP
#define GSOFTMAX_SERIALIZATION_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "gsoftmax/dist_analysis.hpp"
#include "gsoftmax/gsoftmax.hpp"
#include "gsoftmax/mlp.hpp"
#include "gsoftmax/multilabel_loss.hpp"
#include "gsoftmax/trainer.hpp"

namespace gsoftmax {

/// {"lambda": .., "classes": [{"mu": .., "sigma": ..}, ...]}
nlohmann::ordered_json predictor_to_json(const PredictorParams& params);
PredictorParams predictor_from_json(const nlohmann::json& doc);

/// {"lambda": .., "pos": [...], "neg": [...]}
nlohmann::ordered_json dual_predictor_to_json(const DualPredictorParams& params);
DualPredictorParams dual_predictor_from_json(const nlohmann::json& doc);

nlohmann::ordered_json report_to_json(const SeparabilityReport& report);
std::string report_to_csv(const SeparabilityReport& report);

/// Network weights plus whatever predictor the loss mode used.
nlohmann::ordered_json model_to_json(const TrainResult& result);

std::string history_to_csv(const std::vector<EpochRecord>& history,
                           const std::string& metric_name);

std::string feature_dump_to_csv(const FeatureDump& dump);
FeatureDump feature_dump_from_csv(const std::string& text);

/// {"<class_id>": [v, ...], ...} -> scalar per-class samples.
FeatureDump feature_dump_from_json(const nlohmann::json& doc);

/// One scored (item, class) pair of a predictions file.
struct PredictionRecord {
    long item_id = 0;
    int class_id = 0;
    double score = 0.0;
    int label = 0;
};

/// Parse "item_id,class_id,score,label" rows (header optional).
std::vector<PredictionRecord> predictions_from_csv(const std::string& text);

/// Shortest-round-trip decimal formatting used by every CSV writer, so
/// rewriting identical data yields identical bytes.
std::string format_double(double v);

} // namespace gsoftmax

#endif
