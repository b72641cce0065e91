#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsoftmax/errors.hpp"
#include "gsoftmax/experiment.hpp"
#include "gsoftmax/gradcheck.hpp"
#include "gsoftmax/lr_schedule.hpp"
#include "gsoftmax/serialization.hpp"

namespace {

using namespace gsoftmax;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

nlohmann::json parse_json_file(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

/// GSOFTMAX_OUT_DIR overrides any configured or flagged output directory.
std::string resolve_out_dir(const std::string& fallback) {
    if (const char* env = std::getenv("GSOFTMAX_OUT_DIR")) {
        if (*env != '\0') return env;
    }
    return fallback;
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::create_directories(path.parent_path().empty()
                                            ? std::filesystem::path(".")
                                            : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << contents;
}

int cmd_gradcheck(int trials, std::uint64_t seed) {
    const GradCheckReport report = run_full_gradcheck(trials, seed);
    for (const GradBlockReport& block : report.blocks) {
        std::cout << (block.passed() ? "PASS" : "FAIL") << "  " << block.name
                  << "  max_rel_err=" << format_double(block.max_rel_err)
                  << "  tol=" << format_double(block.tolerance);
        if (!block.passed()) {
            std::cout << "  worst_seed=" << block.worst_seed
                      << " index=" << block.worst_index;
        }
        std::cout << '\n';
    }
    if (!report.passed()) {
        throw NumericError("gradient check failed");
    }
    return 0;
}

int cmd_schedule_preview(const ScheduleSpec& spec) {
    std::cout << "epoch,rate\n";
    for (int epoch = 1; epoch <= spec.max_epoch; ++epoch) {
        std::cout << epoch << ',' << format_double(rate_at(spec, epoch)) << '\n';
    }
    return 0;
}

int cmd_analyze(const std::string& input, const std::string& out_dir,
                const AnalysisOptions& options) {
    FeatureDump dump;
    if (input.size() > 5 && input.substr(input.size() - 5) == ".json") {
        dump = feature_dump_from_json(parse_json_file(input));
    } else {
        dump = feature_dump_from_csv(read_file(input));
    }
    const SeparabilityReport report = analyze_feature_dump(dump, options);
    const nlohmann::ordered_json doc = report_to_json(report);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_text(dir / "report.json", doc.dump(2) + "\n");
    write_text(dir / "report.csv", report_to_csv(report));
    std::cout << doc.dump(2) << '\n';
    return 0;
}

int cmd_metrics(const std::string& input, double threshold,
                const std::string& out_dir) {
    const auto records = predictions_from_csv(read_file(input));
    const nlohmann::ordered_json doc = metrics_from_predictions(records, threshold);
    if (!out_dir.empty()) {
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        write_text(dir / "metrics.json", doc.dump(2) + "\n");
    }
    std::cout << doc.dump(2) << '\n';
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            const std::string& format_override, bool seed_given,
            std::uint64_t seed_override) {
    ExperimentConfig config = experiment_config_from_json(parse_json_file(config_path));
    if (!out_override.empty()) config.output_dir = out_override;
    config.output_dir = resolve_out_dir(config.output_dir);
    if (!format_override.empty()) {
        if (format_override != "json" && format_override != "csv") {
            throw ValidationError("--format must be json or csv");
        }
        config.format = format_override;
    }
    if (seed_given) config.seeds = {seed_override};
    const nlohmann::ordered_json summary = run_experiment(config);
    std::cout << summary.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-based softmax predictor: training, gradient checks, "
                 "schedules and feature-distribution analysis"};
    app.require_subcommand(1);

    // gradcheck
    auto* gradcheck = app.add_subcommand(
        "gradcheck", "Finite-difference check of every analytic gradient");
    int trials = 1000;
    std::uint64_t gc_seed = 12345;
    gradcheck->add_option("--trials", trials, "Random configurations per suite")
        ->check(CLI::PositiveNumber);
    gradcheck->add_option("--seed", gc_seed, "Base RNG seed");

    // run
    auto* run = app.add_subcommand("run", "Run a training/analysis experiment");
    std::string run_config, run_out, run_format;
    std::uint64_t run_seed = 0;
    bool run_seed_given = false;
    run->add_option("--config", run_config, "Experiment config JSON")->required();
    run->add_option("--out", run_out, "Output directory (overrides config)");
    run->add_option("--format", run_format, "Summary format: json or csv");
    run->add_option("--seed", run_seed, "Run a single seed instead of the config list")
        ->each([&](const std::string&) { run_seed_given = true; });

    // schedule-preview
    auto* preview = app.add_subcommand(
        "schedule-preview", "Print (epoch, rate) rows for a malleable schedule");
    std::string preview_config;
    double preview_base = 0.1;
    int preview_max_epoch = 0;
    std::vector<std::string> preview_pieces;
    preview->add_option("--config", preview_config,
                        "Schedule JSON {base_rate, max_epoch, pieces}");
    preview->add_option("--base-rate", preview_base, "Base learning rate");
    preview->add_option("--max-epoch", preview_max_epoch, "Total epochs");
    preview->add_option("--piece", preview_pieces,
                        "Piece as end:exp_start:exp_end (repeatable)");

    // analyze
    auto* analyze = app.add_subcommand(
        "analyze", "Compactness/separability report from a feature dump");
    std::string analyze_input, analyze_out = ".", analyze_impostor = "per-class",
                analyze_divisor = "n-1";
    analyze->add_option("--input", analyze_input, "Feature dump CSV or JSON")
        ->required();
    analyze->add_option("--out", analyze_out, "Output directory");
    analyze->add_option("--impostor", analyze_impostor, "per-class or pooled");
    analyze->add_option("--sigma-divisor", analyze_divisor, "n-1 or n");

    // metrics
    auto* metrics = app.add_subcommand(
        "metrics", "Ranking and precision/recall metrics from a predictions file");
    std::string metrics_input, metrics_out;
    double metrics_threshold = 0.5;
    metrics->add_option("--input", metrics_input,
                        "CSV rows: item_id,class_id,score,label")
        ->required();
    metrics->add_option("--threshold", metrics_threshold,
                        "Decision threshold for precision/recall");
    metrics->add_option("--out", metrics_out, "Also write metrics.json here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gradcheck->parsed()) {
            return cmd_gradcheck(trials, gc_seed);
        }
        if (run->parsed()) {
            return cmd_run(run_config, resolve_out_dir(run_out), run_format,
                           run_seed_given, run_seed);
        }
        if (preview->parsed()) {
            ScheduleSpec spec;
            if (!preview_config.empty()) {
                spec = schedule_spec_from_json(parse_json_file(preview_config));
            } else {
                if (preview_max_epoch <= 0 || preview_pieces.empty()) {
                    throw ValidationError(
                        "schedule-preview needs --config or --max-epoch with --piece");
                }
                spec.base_rate = preview_base;
                spec.max_epoch = preview_max_epoch;
                for (const std::string& text : preview_pieces) {
                    SchedulePiece piece;
                    char sep1 = 0, sep2 = 0;
                    std::istringstream in(text);
                    if (!(in >> piece.end_epoch >> sep1 >> piece.exp_start >> sep2 >>
                          piece.exp_end) ||
                        sep1 != ':' || sep2 != ':') {
                        throw ValidationError("bad --piece '" + text +
                                              "', expected end:exp_start:exp_end");
                    }
                    spec.pieces.push_back(piece);
                }
                try {
                    spec.validate();
                } catch (const std::domain_error& e) {
                    throw ValidationError(std::string("schedule: ") + e.what());
                }
            }
            return cmd_schedule_preview(spec);
        }
        if (analyze->parsed()) {
            AnalysisOptions options;
            if (analyze_impostor == "per-class") {
                options.impostor = ImpostorMode::per_class;
            } else if (analyze_impostor == "pooled") {
                options.impostor = ImpostorMode::pooled;
            } else {
                throw ValidationError("--impostor must be per-class or pooled");
            }
            if (analyze_divisor == "n-1") {
                options.sigma_divisor = StdDevMode::unbiased;
            } else if (analyze_divisor == "n") {
                options.sigma_divisor = StdDevMode::population;
            } else {
                throw ValidationError("--sigma-divisor must be n-1 or n");
            }
            return cmd_analyze(analyze_input, resolve_out_dir(analyze_out), options);
        }
        if (metrics->parsed()) {
            return cmd_metrics(metrics_input, metrics_threshold, metrics_out);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
