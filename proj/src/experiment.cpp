#include "gsoftmax/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gsoftmax/errors.hpp"
#include "gsoftmax/ranking_metrics.hpp"

namespace gsoftmax {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void check_keys(const json& obj, const std::string& context,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        throw ValidationError(context + ": expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
                return key == a;
            }) == allowed.end()) {
            throw ValidationError(context + ": unknown key '" + key + "'");
        }
    }
}

const json& require_key(const json& obj, const char* key, const std::string& context) {
    if (!obj.contains(key)) {
        throw ValidationError(context + ": missing key '" + key + "'");
    }
    return obj.at(key);
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    return obj.at(key).get<T>();
}

DatasetConfig dataset_from_json(const json& doc) {
    DatasetConfig out;
    const std::string type =
        require_key(doc, "type", "dataset").get<std::string>();
    if (type == "blobs") {
        check_keys(doc, "dataset",
                   {"type", "num_classes", "dim", "centers", "spreads",
                    "samples_per_class", "test_samples_per_class", "seed"});
        out.kind = DatasetConfig::Kind::blobs;
        out.blobs.num_classes =
            require_key(doc, "num_classes", "dataset").get<std::size_t>();
        out.blobs.dim = require_key(doc, "dim", "dataset").get<std::size_t>();
        out.blobs.centers = require_key(doc, "centers", "dataset")
                                .get<std::vector<std::vector<double>>>();
        out.blobs.spreads =
            require_key(doc, "spreads", "dataset").get<std::vector<double>>();
        out.blobs.samples_per_class =
            require_key(doc, "samples_per_class", "dataset").get<std::size_t>();
        out.test_samples_per_class = get_or<std::size_t>(
            doc, "test_samples_per_class", out.blobs.samples_per_class);
        out.blobs.seed = get_or<std::uint64_t>(doc, "seed", 0);
        out.blobs.validate();
    } else if (type == "cifar10") {
        check_keys(doc, "dataset", {"type", "train_files", "test_files"});
        out.kind = DatasetConfig::Kind::cifar10;
        out.train_files = require_key(doc, "train_files", "dataset")
                              .get<std::vector<std::string>>();
        out.test_files =
            require_key(doc, "test_files", "dataset").get<std::vector<std::string>>();
        if (out.train_files.empty() || out.test_files.empty()) {
            throw ValidationError("dataset: cifar10 needs train_files and test_files");
        }
    } else {
        throw ValidationError("dataset: unknown type '" + type + "'");
    }
    return out;
}

LrSchedule schedule_from_json(const json& doc, int epochs) {
    const std::string type =
        require_key(doc, "type", "schedule").get<std::string>();
    if (type == "malleable") {
        check_keys(doc, "schedule", {"type", "base_rate", "pieces"});
        ScheduleSpec spec;
        spec.base_rate = require_key(doc, "base_rate", "schedule").get<double>();
        spec.max_epoch = epochs;
        for (const auto& piece : require_key(doc, "pieces", "schedule")) {
            if (!piece.is_array() || piece.size() != 3) {
                throw ValidationError(
                    "schedule: each piece is [end_epoch, exp_start, exp_end]");
            }
            spec.pieces.push_back({piece.at(0).get<int>(), piece.at(1).get<double>(),
                                   piece.at(2).get<double>()});
        }
        try {
            spec.validate();
        } catch (const std::domain_error& e) {
            throw ValidationError(std::string("schedule: ") + e.what());
        }
        return spec;
    }
    if (type == "staircase") {
        check_keys(doc, "schedule", {"type", "steps"});
        std::vector<StairStep> steps;
        for (const auto& step : require_key(doc, "steps", "schedule")) {
            if (!step.is_array() || step.size() != 2) {
                throw ValidationError("schedule: each step is [end_epoch, rate]");
            }
            steps.push_back({step.at(0).get<int>(), step.at(1).get<double>()});
        }
        if (steps.empty() || steps.back().end_epoch < epochs) {
            throw ValidationError("schedule: staircase steps must cover every epoch");
        }
        return steps;
    }
    if (type == "linspace") {
        check_keys(doc, "schedule", {"type", "base_rate", "start", "end"});
        LinspaceSpec spec;
        spec.base_rate = require_key(doc, "base_rate", "schedule").get<double>();
        spec.start = require_key(doc, "start", "schedule").get<double>();
        spec.end = require_key(doc, "end", "schedule").get<double>();
        return spec;
    }
    if (type == "constant") {
        check_keys(doc, "schedule", {"type", "rate"});
        const double rate = require_key(doc, "rate", "schedule").get<double>();
        if (!(rate > 0.0)) {
            throw ValidationError("schedule: constant rate must be > 0");
        }
        return LinspaceSpec{1.0, 1.0, rate};
    }
    throw ValidationError("schedule: unknown type '" + type + "'");
}

} // namespace

ScheduleSpec schedule_spec_from_json(const nlohmann::json& doc) {
    check_keys(doc, "schedule", {"base_rate", "max_epoch", "pieces"});
    ScheduleSpec spec;
    spec.base_rate = require_key(doc, "base_rate", "schedule").get<double>();
    spec.max_epoch = require_key(doc, "max_epoch", "schedule").get<int>();
    for (const auto& piece : require_key(doc, "pieces", "schedule")) {
        if (!piece.is_array() || piece.size() != 3) {
            throw ValidationError("schedule: each piece is [end_epoch, exp_start, exp_end]");
        }
        spec.pieces.push_back({piece.at(0).get<int>(), piece.at(1).get<double>(),
                               piece.at(2).get<double>()});
    }
    try {
        spec.validate();
    } catch (const std::domain_error& e) {
        throw ValidationError(std::string("schedule: ") + e.what());
    }
    return spec;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc) {
    check_keys(doc, "config",
               {"dataset", "model", "loss_modes", "predictor", "optimizer", "schedule",
                "epochs", "batch_size", "seeds", "analysis", "output_dir", "format"});
    ExperimentConfig config;
    config.dataset = dataset_from_json(require_key(doc, "dataset", "config"));

    const json& model = require_key(doc, "model", "config");
    check_keys(model, "model", {"hidden_dims", "seed", "activation"});
    config.hidden_dims = require_key(model, "hidden_dims", "model").get<std::vector<int>>();
    config.model_seed = get_or<std::uint64_t>(model, "seed", 0);
    const std::string activation = get_or<std::string>(model, "activation", "relu");
    if (activation != "relu") {
        throw ValidationError("model: unsupported activation '" + activation + "'");
    }

    for (const auto& mode : require_key(doc, "loss_modes", "config")) {
        config.loss_modes.push_back(loss_mode_from_string(mode.get<std::string>()));
    }
    if (config.loss_modes.empty()) {
        throw ValidationError("config: loss_modes must not be empty");
    }

    if (doc.contains("predictor")) {
        const json& pred = doc.at("predictor");
        check_keys(pred, "predictor",
                   {"lambda", "mu_init", "sigma_init", "learn_lambda", "lr_multiplier",
                    "weight_decay_on_distribution"});
        config.predictor.lambda = get_or(pred, "lambda", 1.0);
        config.predictor.mu_init = get_or(pred, "mu_init", 0.0);
        config.predictor.sigma_init = get_or(pred, "sigma_init", 1.0);
        config.predictor.learn_lambda = get_or(pred, "learn_lambda", false);
        config.predictor.lr_multiplier = get_or(pred, "lr_multiplier", 1.0);
        config.predictor.weight_decay_on_distribution =
            get_or(pred, "weight_decay_on_distribution", true);
        if (config.predictor.lambda < 0.0 || config.predictor.sigma_init <= 0.0) {
            throw ValidationError("predictor: need lambda >= 0 and sigma_init > 0");
        }
    }

    if (doc.contains("optimizer")) {
        const json& opt = doc.at("optimizer");
        check_keys(opt, "optimizer", {"momentum", "weight_decay"});
        config.optimizer.momentum = get_or(opt, "momentum", 0.9);
        config.optimizer.weight_decay = get_or(opt, "weight_decay", 5e-4);
        if (config.optimizer.momentum < 0.0 || config.optimizer.momentum >= 1.0 ||
            config.optimizer.weight_decay < 0.0) {
            throw ValidationError("optimizer: momentum in [0,1), weight_decay >= 0");
        }
    }

    config.epochs = require_key(doc, "epochs", "config").get<int>();
    config.batch_size = get_or(doc, "batch_size", 32);
    if (config.epochs < 1 || config.batch_size < 1) {
        throw ValidationError("config: epochs and batch_size must be >= 1");
    }

    config.schedule =
        schedule_from_json(require_key(doc, "schedule", "config"), config.epochs);

    config.seeds = get_or<std::vector<std::uint64_t>>(doc, "seeds", {0});
    if (config.seeds.empty()) {
        throw ValidationError("config: seeds must not be empty");
    }

    if (doc.contains("analysis")) {
        const json& anl = doc.at("analysis");
        check_keys(anl, "analysis", {"impostor", "sigma_divisor"});
        const std::string impostor = get_or<std::string>(anl, "impostor", "per-class");
        if (impostor == "per-class") {
            config.analysis.impostor = ImpostorMode::per_class;
        } else if (impostor == "pooled") {
            config.analysis.impostor = ImpostorMode::pooled;
        } else {
            throw ValidationError("analysis: impostor must be 'per-class' or 'pooled'");
        }
        const std::string divisor = get_or<std::string>(anl, "sigma_divisor", "n-1");
        if (divisor == "n-1") {
            config.analysis.sigma_divisor = StdDevMode::unbiased;
        } else if (divisor == "n") {
            config.analysis.sigma_divisor = StdDevMode::population;
        } else {
            throw ValidationError("analysis: sigma_divisor must be 'n-1' or 'n'");
        }
    }

    config.output_dir = get_or<std::string>(doc, "output_dir", "out");
    config.format = get_or<std::string>(doc, "format", "json");
    if (config.format != "json" && config.format != "csv") {
        throw ValidationError("config: format must be 'json' or 'csv'");
    }
    return config;
}

ClassSamples class_samples_from_dump(const FeatureDump& dump) {
    ClassSamples out;
    if (dump.rows.empty()) {
        throw DataError("class_samples_from_dump: empty dump");
    }
    int max_class = 0;
    for (const auto& [class_id, values] : dump.rows) {
        (void)values;
        if (class_id < 0) {
            throw DataError("class_samples_from_dump: negative class id");
        }
        max_class = std::max(max_class, class_id);
    }
    if (dump.num_outputs == 1) {
        // Scalar dump: each row is already a per-class sample.
        for (const auto& [class_id, values] : dump.rows) {
            out.own[class_id].push_back(values[0]);
        }
        out.has_impostor = false;
        return out;
    }
    const std::size_t m = static_cast<std::size_t>(max_class) + 1;
    if (m > dump.num_outputs) {
        throw DataError("class_samples_from_dump: class id exceeds feature columns");
    }
    for (const auto& [class_id, values] : dump.rows) {
        const auto c = static_cast<std::size_t>(class_id);
        out.own[class_id].push_back(values[c]);
        for (std::size_t j = 0; j < m; ++j) {
            if (j != c) out.impostor[class_id].push_back(values[j]);
        }
    }
    out.has_impostor = true;
    return out;
}

SeparabilityReport analyze_feature_dump(const FeatureDump& dump,
                                        const AnalysisOptions& options) {
    const ClassSamples samples = class_samples_from_dump(dump);
    if (options.impostor == ImpostorMode::pooled) {
        if (!samples.has_impostor) {
            throw ValidationError(
                "analyze: pooled impostor mode needs a per-sample feature dump, "
                "not scalar samples");
        }
        return separability_report_pooled(samples.own, samples.impostor,
                                          options.sigma_divisor);
    }
    return separability_report(samples.own, options.sigma_divisor);
}

nlohmann::ordered_json metrics_from_predictions(
    const std::vector<PredictionRecord>& records, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ValidationError("metrics: threshold must be inside (0, 1)");
    }
    int max_class = 0;
    for (const PredictionRecord& r : records) {
        if (r.class_id < 0) {
            throw DataError("metrics: negative class id");
        }
        if (!(r.score >= 0.0 && r.score <= 1.0)) {
            throw DataError("metrics: scores must be probabilities in [0, 1]");
        }
        max_class = std::max(max_class, r.class_id);
    }
    const std::size_t m = static_cast<std::size_t>(max_class) + 1;

    // Ranked lists per class for AP.
    std::vector<std::vector<ScoredItem>> per_class(m);
    for (const PredictionRecord& r : records) {
        per_class[static_cast<std::size_t>(r.class_id)].push_back(
            {r.score, r.label != 0});
    }

    // Dense item x class matrices for the thresholded metrics. Pairs absent
    // from the file count as score 0 / label 0, which leaves every count
    // unchanged.
    std::map<long, std::size_t> item_index;
    for (const PredictionRecord& r : records) {
        item_index.emplace(r.item_id, item_index.size());
    }
    std::vector<std::vector<double>> probs(item_index.size(),
                                           std::vector<double>(m, 0.0));
    std::vector<std::vector<int>> labels(item_index.size(), std::vector<int>(m, 0));
    for (const PredictionRecord& r : records) {
        const std::size_t row = item_index.at(r.item_id);
        probs[row][static_cast<std::size_t>(r.class_id)] = r.score;
        labels[row][static_cast<std::size_t>(r.class_id)] = r.label;
    }

    ordered_json out;
    out["num_items"] = item_index.size();
    out["num_classes"] = m;
    out["threshold"] = threshold;
    ordered_json ap_json = ordered_json::object();
    double ap_sum = 0.0;
    std::size_t ap_count = 0;
    std::vector<std::size_t> excluded;
    for (std::size_t c = 0; c < m; ++c) {
        const bool has_relevant =
            std::any_of(per_class[c].begin(), per_class[c].end(),
                        [](const ScoredItem& it) { return it.relevant; });
        if (!has_relevant) {
            excluded.push_back(c);
            ap_json[std::to_string(c)] = nullptr;
            continue;
        }
        const double ap = average_precision(per_class[c]);
        ap_json[std::to_string(c)] = ap;
        ap_sum += ap;
        ++ap_count;
    }
    if (ap_count == 0) {
        throw DataError("metrics: no class has a relevant item");
    }
    out["per_class_ap"] = std::move(ap_json);
    out["map"] = ap_sum / static_cast<double>(ap_count);
    out["excluded_classes"] = excluded;

    const ConfusionCounts counts = binarize_predictions(probs, labels, threshold);
    const PrfMetrics prf = prf_metrics(counts);
    ordered_json prf_json;
    prf_json["C-P"] = prf.class_precision;
    prf_json["C-R"] = prf.class_recall;
    prf_json["C-F1"] = prf.class_f1;
    prf_json["O-P"] = prf.overall_precision;
    prf_json["O-R"] = prf.overall_recall;
    prf_json["O-F1"] = prf.overall_f1;
    out["prf"] = std::move(prf_json);
    return out;
}

namespace {

constexpr std::uint64_t kSeedMix = 0x9e3779b97f4a7c15ULL;

struct RunOutput {
    LossMode mode;
    std::uint64_t seed = 0;
    TrainResult result;
    std::vector<double> per_class_ap;
    SeparabilityReport report;
};

Dataset build_train_dataset(const DatasetConfig& cfg, std::uint64_t run_seed) {
    if (cfg.kind == DatasetConfig::Kind::blobs) {
        SyntheticBlobSpec spec = cfg.blobs;
        spec.seed = cfg.blobs.seed + run_seed * 1000003ULL;
        return generate_blobs(spec);
    }
    Dataset all;
    for (const std::string& path : cfg.train_files) {
        Dataset part = load_cifar10_binary(path);
        if (all.size() == 0) {
            all = std::move(part);
        } else {
            all.features.insert(all.features.end(),
                                std::make_move_iterator(part.features.begin()),
                                std::make_move_iterator(part.features.end()));
            all.labels.insert(all.labels.end(), part.labels.begin(), part.labels.end());
        }
    }
    return all;
}

Dataset build_test_dataset(const DatasetConfig& cfg, std::uint64_t run_seed) {
    if (cfg.kind == DatasetConfig::Kind::blobs) {
        SyntheticBlobSpec spec = cfg.blobs;
        spec.samples_per_class = cfg.test_samples_per_class;
        spec.seed = (cfg.blobs.seed + run_seed * 1000003ULL) ^ kSeedMix;
        return generate_blobs(spec);
    }
    Dataset all;
    for (const std::string& path : cfg.test_files) {
        Dataset part = load_cifar10_binary(path);
        if (all.size() == 0) {
            all = std::move(part);
        } else {
            all.features.insert(all.features.end(),
                                std::make_move_iterator(part.features.begin()),
                                std::make_move_iterator(part.features.end()));
            all.labels.insert(all.labels.end(), part.labels.begin(), part.labels.end());
        }
    }
    return all;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << contents;
}

ordered_json separability_to_summary(const SeparabilityReport& report) {
    ordered_json doc;
    doc["mean_compactness"] = report.mean_compactness();
    doc["mean_separability"] = report.mean_separability();
    doc["mean_ratio"] = report.mean_ratio();
    ordered_json per_class = ordered_json::array();
    for (const ClassSeparability& c : report.per_class) {
        ordered_json entry;
        entry["class_id"] = c.class_id;
        entry["compactness"] = c.compactness;
        entry["separability"] = c.separability;
        entry["ratio"] = c.ratio;
        per_class.push_back(std::move(entry));
    }
    doc["per_class"] = std::move(per_class);
    return doc;
}

} // namespace

nlohmann::ordered_json run_experiment(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    const fs::path out_dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw DataError("cannot create output directory " + out_dir.string());
    }

    std::vector<RunOutput> runs;
    ordered_json summary;
    ordered_json runs_json = ordered_json::array();

    for (LossMode mode : config.loss_modes) {
        for (std::uint64_t seed : config.seeds) {
            const Dataset train_data = build_train_dataset(config.dataset, seed);
            const Dataset test_data = build_test_dataset(config.dataset, seed);

            MlpConfig mlp_config;
            mlp_config.input_dim = static_cast<int>(train_data.feature_dim);
            mlp_config.hidden_dims = config.hidden_dims;
            mlp_config.output_dim =
                static_cast<int>(loss_mode_is_dual(mode) ? 2 * train_data.num_classes
                                                         : train_data.num_classes);
            mlp_config.seed = config.model_seed + seed;

            TrainOptions options;
            options.loss_mode = mode;
            options.epochs = config.epochs;
            options.batch_size = config.batch_size;
            options.optimizer = config.optimizer;
            options.predictor = config.predictor;
            options.schedule = config.schedule;
            options.shuffle_seed = (config.model_seed + seed) ^ kSeedMix;

            RunOutput run{mode, seed, train(mlp_config, options, train_data, test_data),
                          {}, {}};
            run.per_class_ap = per_class_average_precision(run.result, test_data);
            const FeatureDump dump = export_features(run.result.model, test_data);
            run.report = analyze_feature_dump(dump, config.analysis);

            const std::string tag =
                to_string(mode) + "_seed" + std::to_string(seed);
            const std::string history_file = "history_" + tag + ".csv";
            const std::string features_file = "features_" + tag + ".csv";
            const std::string model_file = "model_" + tag + ".json";
            const std::string report_json_file = "report_" + tag + ".json";
            const std::string report_csv_file = "report_" + tag + ".csv";
            write_file(out_dir / history_file,
                       history_to_csv(run.result.history, run.result.metric_name));
            write_file(out_dir / features_file, feature_dump_to_csv(dump));
            write_file(out_dir / model_file, model_to_json(run.result).dump(2) + "\n");
            write_file(out_dir / report_json_file,
                       report_to_json(run.report).dump(2) + "\n");
            write_file(out_dir / report_csv_file, report_to_csv(run.report));

            ordered_json rj;
            rj["loss_mode"] = to_string(mode);
            rj["seed"] = seed;
            rj["metric"] = run.result.metric_name;
            const EpochRecord& last = run.result.history.back();
            rj["final_train_loss"] = last.train_loss;
            rj["final_train_metric"] = last.train_metric;
            rj["final_test_metric"] = last.test_metric;
            rj["per_class_ap"] = run.per_class_ap;
            double ap_sum = 0.0;
            std::size_t ap_n = 0;
            for (double ap : run.per_class_ap) {
                if (std::isfinite(ap)) {
                    ap_sum += ap;
                    ++ap_n;
                }
            }
            rj["test_map"] = ap_n > 0 ? ap_sum / static_cast<double>(ap_n) : 0.0;
            rj["separability"] = separability_to_summary(run.report);
            ordered_json files;
            files["history"] = history_file;
            files["features"] = features_file;
            files["model"] = model_file;
            files["report_json"] = report_json_file;
            files["report_csv"] = report_csv_file;
            rj["files"] = std::move(files);
            runs_json.push_back(std::move(rj));
            runs.push_back(std::move(run));
        }
    }

    summary["epochs"] = config.epochs;
    summary["seeds"] = config.seeds;
    ordered_json modes_json = ordered_json::array();
    for (LossMode mode : config.loss_modes) modes_json.push_back(to_string(mode));
    summary["loss_modes"] = std::move(modes_json);
    summary["runs"] = std::move(runs_json);

    // Per-mode aggregates over seeds.
    ordered_json aggregates = ordered_json::object();
    std::map<std::string, std::vector<double>> mode_mean_ap;
    for (LossMode mode : config.loss_modes) {
        const std::string name = to_string(mode);
        double metric_sum = 0.0, ratio_sum = 0.0, compact_sum = 0.0, sep_sum = 0.0;
        std::size_t n = 0;
        std::vector<double> ap_sum;
        std::vector<std::size_t> ap_count;
        for (const RunOutput& run : runs) {
            if (run.mode != mode) continue;
            metric_sum += run.result.history.back().test_metric;
            ratio_sum += run.report.mean_ratio();
            compact_sum += run.report.mean_compactness();
            sep_sum += run.report.mean_separability();
            ++n;
            if (ap_sum.size() < run.per_class_ap.size()) {
                ap_sum.resize(run.per_class_ap.size(), 0.0);
                ap_count.resize(run.per_class_ap.size(), 0);
            }
            for (std::size_t c = 0; c < run.per_class_ap.size(); ++c) {
                if (std::isfinite(run.per_class_ap[c])) {
                    ap_sum[c] += run.per_class_ap[c];
                    ++ap_count[c];
                }
            }
        }
        std::vector<double> mean_ap(ap_sum.size(),
                                    std::numeric_limits<double>::quiet_NaN());
        for (std::size_t c = 0; c < ap_sum.size(); ++c) {
            if (ap_count[c] > 0) mean_ap[c] = ap_sum[c] / static_cast<double>(ap_count[c]);
        }
        mode_mean_ap[name] = mean_ap;
        ordered_json agg;
        agg["mean_test_metric"] = metric_sum / static_cast<double>(n);
        agg["mean_ratio"] = ratio_sum / static_cast<double>(n);
        agg["mean_compactness"] = compact_sum / static_cast<double>(n);
        agg["mean_separability"] = sep_sum / static_cast<double>(n);
        agg["mean_per_class_ap"] = mean_ap;
        aggregates[name] = std::move(agg);
    }
    summary["aggregates"] = std::move(aggregates);

    // Head-to-head analysis when exactly two loss modes were run: paired
    // t-test and Pearson correlation over the per-class AP pairs.
    if (config.loss_modes.size() == 2) {
        const std::string a = to_string(config.loss_modes[0]);
        const std::string b = to_string(config.loss_modes[1]);
        const std::vector<double>& ap_a = mode_mean_ap[a];
        const std::vector<double>& ap_b = mode_mean_ap[b];
        std::vector<double> xa, xb;
        for (std::size_t c = 0; c < std::min(ap_a.size(), ap_b.size()); ++c) {
            if (std::isfinite(ap_a[c]) && std::isfinite(ap_b[c])) {
                xa.push_back(ap_a[c]);
                xb.push_back(ap_b[c]);
            }
        }
        ordered_json cmp;
        cmp["modes"] = {a, b};
        cmp["classes_compared"] = xa.size();
        try {
            const TTestResult t = paired_t_test(xa, xb);
            cmp["ap_t_test"] = {{"t_stat", t.t_stat}, {"p_val", t.p_val}};
        } catch (const std::exception& e) {
            cmp["ap_t_test"] = {{"degenerate", true}, {"reason", e.what()}};
        }
        try {
            const PearsonResult p = pearson_correlation(xa, xb);
            cmp["ap_pearson"] = {{"rho", p.rho}, {"p_val", p.p_val}};
        } catch (const std::exception& e) {
            cmp["ap_pearson"] = {{"degenerate", true}, {"reason", e.what()}};
        }
        summary["comparison"] = std::move(cmp);
    } else {
        summary["comparison"] = nullptr;
    }

    if (config.format == "csv") {
        std::ostringstream csv;
        csv << "loss_mode,seed,final_train_loss,final_test_metric,test_map,"
               "mean_compactness,mean_separability,mean_ratio\n";
        for (const auto& rj : summary["runs"]) {
            csv << rj["loss_mode"].get<std::string>() << ','
                << rj["seed"].get<std::uint64_t>() << ','
                << format_double(rj["final_train_loss"].get<double>()) << ','
                << format_double(rj["final_test_metric"].get<double>()) << ','
                << format_double(rj["test_map"].get<double>()) << ','
                << format_double(
                       rj["separability"]["mean_compactness"].get<double>())
                << ','
                << format_double(
                       rj["separability"]["mean_separability"].get<double>())
                << ',' << format_double(rj["separability"]["mean_ratio"].get<double>())
                << '\n';
        }
        write_file(out_dir / "summary.csv", csv.str());
    } else {
        write_file(out_dir / "summary.json", summary.dump(2) + "\n");
    }
    return summary;
}

} // namespace gsoftmax
