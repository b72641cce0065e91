#ifndef GSOFTMAX_EXPERIMENT_HPP
#define GSOFTMAX_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsoftmax/dataset.hpp"
#include "gsoftmax/dist_analysis.hpp"
#include "gsoftmax/serialization.hpp"
#include "gsoftmax/trainer.hpp"

namespace gsoftmax {

/// How the impostor distribution entering the separability scores is built:
/// per_class compares each class's own-feature distribution against every
/// other class's; pooled compares it against the pooled off-class feature
/// values of its own samples.
enum class ImpostorMode { per_class, pooled };

struct AnalysisOptions {
    ImpostorMode impostor = ImpostorMode::per_class;
    StdDevMode sigma_divisor = StdDevMode::unbiased;
};

struct DatasetConfig {
    enum class Kind { blobs, cifar10 };
    Kind kind = Kind::blobs;

    // blobs
    SyntheticBlobSpec blobs;
    std::size_t test_samples_per_class = 0;

    // cifar10
    std::vector<std::string> train_files;
    std::vector<std::string> test_files;
};

/// Everything one `run` invocation needs. Parsed strictly: unknown keys are
/// rejected so typos fail loudly before any training starts.
struct ExperimentConfig {
    DatasetConfig dataset;
    std::vector<int> hidden_dims;
    std::uint64_t model_seed = 0;
    std::vector<LossMode> loss_modes;
    PredictorOptions predictor;
    OptimizerConfig optimizer;
    LrSchedule schedule = LinspaceSpec{1.0, 1.0, 0.01};
    int epochs = 1;
    int batch_size = 32;
    std::vector<std::uint64_t> seeds;
    AnalysisOptions analysis;
    std::string output_dir = "out";
    std::string format = "json";
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);

/// Standalone schedule document for the schedule-preview command:
/// {"base_rate": .., "max_epoch": .., "pieces": [[end, exp_start, exp_end]..]}.
ScheduleSpec schedule_spec_from_json(const nlohmann::json& doc);

/// Per-class sample sets extracted from a feature dump: own[c] collects
/// column c of the rows labeled c; impostor[c] pools the other class columns
/// of those same rows. Scalar dumps (single value per row) only fill own.
struct ClassSamples {
    std::map<int, std::vector<double>> own;
    std::map<int, std::vector<double>> impostor;
    bool has_impostor = false;
};

ClassSamples class_samples_from_dump(const FeatureDump& dump);

SeparabilityReport analyze_feature_dump(const FeatureDump& dump,
                                        const AnalysisOptions& options);

/// All ranking metrics of a predictions table: per-class AP, mAP, and the
/// per-class / overall precision, recall and F1 at the given threshold.
nlohmann::ordered_json metrics_from_predictions(
    const std::vector<PredictionRecord>& records, double threshold);

/// Train every (loss mode, seed) combination, write history / feature /
/// model / report files plus summary.(json|csv) into output_dir, and return
/// the summary document. Identical configs produce byte-identical outputs.
nlohmann::ordered_json run_experiment(const ExperimentConfig& config);

} // namespace gsoftmax

#endif
