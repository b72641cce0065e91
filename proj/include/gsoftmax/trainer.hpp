#ifndef GSOFTMAX_TRAINER_HPP
#define GSOFTMAX_TRAINER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gsoftmax/dataset.hpp"
#include "gsoftmax/gsoftmax.hpp"
#include "gsoftmax/lr_schedule.hpp"
#include "gsoftmax/mlp.hpp"
#include "gsoftmax/multilabel_loss.hpp"

namespace gsoftmax {

enum class LossMode { softmax, gsoftmax, msml, dual_sigmoid, gsoftmax_multilabel };

/// The dual modes feed two feature banks (2m network outputs).
bool loss_mode_is_dual(LossMode mode);
/// Multi-label modes are evaluated by mAP instead of accuracy.
bool loss_mode_is_multilabel(LossMode mode);

std::string to_string(LossMode mode);
LossMode loss_mode_from_string(const std::string& name);

/// SGD with momentum and weight decay: v <- momentum * v - lr * (g + decay * w),
/// w <- w + v.
struct OptimizerConfig {
    double momentum = 0.9;
    double weight_decay = 5e-4;
};

struct PredictorOptions {
    double lambda = 1.0;
    double mu_init = 0.0;
    double sigma_init = 1.0;
    /// Train lambda by SGD instead of keeping it fixed (clamped at 0).
    bool learn_lambda = false;
    /// Learning-rate multiplier for mu / log sigma (and lambda if learned).
    double lr_multiplier = 1.0;
    /// Apply weight decay to mu / log sigma like any other parameter.
    bool weight_decay_on_distribution = true;
};

struct LinspaceSpec {
    double start = 1.0;
    double end = 1.0;
    double base_rate = 0.1;
};

using LrSchedule = std::variant<ScheduleSpec, std::vector<StairStep>, LinspaceSpec>;

/// Rate for a 1-based epoch; max_epoch is the training horizon (used by the
/// linspace form; the other forms carry their own).
double schedule_rate(const LrSchedule& schedule, int epoch, int max_epoch);

struct TrainOptions {
    LossMode loss_mode = LossMode::softmax;
    int epochs = 1;
    int batch_size = 32;
    OptimizerConfig optimizer;
    PredictorOptions predictor;
    LrSchedule schedule = LinspaceSpec{1.0, 1.0, 0.01};
    std::uint64_t shuffle_seed = 0;
};

struct EpochRecord {
    int epoch = 0;
    double lr = 0.0;
    double train_loss = 0.0;
    double train_metric = 0.0;
    double test_metric = 0.0;
};

struct TrainResult {
    LossMode loss_mode = LossMode::softmax;
    Mlp model;
    std::optional<PredictorParams> predictor;          // gsoftmax mode
    std::optional<DualPredictorParams> dual_predictor; // gsoftmax_multilabel mode
    std::vector<EpochRecord> history;
    std::string metric_name; // "accuracy" or "map"
};

/// Train the network (and, for the Gaussian modes, the predictor parameters)
/// with single-threaded deterministic SGD. Throws NumericError carrying the
/// epoch/step if the loss stops being finite.
TrainResult train(const MlpConfig& model_config, const TrainOptions& options,
                  const Dataset& train_data, const Dataset& test_data);

/// Accuracy / mAP of a trained model on a dataset, matching the mode's
/// training-time metric.
double evaluate_metric(const TrainResult& result, const Dataset& data);

/// Per-class average precision on a dataset, from the mode's class scores
/// (probabilities for the softmax heads, sigmoids for the multi-label heads).
std::vector<double> per_class_average_precision(const TrainResult& result,
                                                const Dataset& data);

/// Final-layer features (network logits) with their ground-truth class.
struct FeatureDump {
    std::size_t num_outputs = 0;
    std::vector<std::pair<int, std::vector<double>>> rows;
};

FeatureDump export_features(const Mlp& model, const Dataset& data);

} // namespace gsoftmax

#endif
