#include "gsoftmax/serialization.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "gsoftmax/errors.hpp"

namespace gsoftmax {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_long(const std::string& s, long& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, ptr);
}

nlohmann::ordered_json predictor_to_json(const PredictorParams& params) {
    nlohmann::ordered_json doc;
    doc["lambda"] = params.lambda;
    doc["classes"] = nlohmann::ordered_json::array();
    for (const ClassGaussian& c : params.classes) {
        nlohmann::ordered_json cls;
        cls["mu"] = c.mu();
        cls["sigma"] = c.sigma();
        doc["classes"].push_back(std::move(cls));
    }
    return doc;
}

PredictorParams predictor_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("lambda") || !doc.contains("classes")) {
        throw ValidationError("predictor document needs lambda and classes");
    }
    PredictorParams params;
    params.lambda = doc.at("lambda").get<double>();
    for (const auto& cls : doc.at("classes")) {
        params.classes.emplace_back(cls.at("mu").get<double>(),
                                    cls.at("sigma").get<double>());
    }
    params.validate();
    return params;
}

nlohmann::ordered_json dual_predictor_to_json(const DualPredictorParams& params) {
    auto bank = [](const std::vector<ClassGaussian>& classes) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const ClassGaussian& c : classes) {
            nlohmann::ordered_json cls;
            cls["mu"] = c.mu();
            cls["sigma"] = c.sigma();
            arr.push_back(std::move(cls));
        }
        return arr;
    };
    nlohmann::ordered_json doc;
    doc["lambda"] = params.lambda;
    doc["pos"] = bank(params.pos);
    doc["neg"] = bank(params.neg);
    return doc;
}

DualPredictorParams dual_predictor_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("lambda") || !doc.contains("pos") ||
        !doc.contains("neg")) {
        throw ValidationError("dual predictor document needs lambda, pos and neg");
    }
    DualPredictorParams params;
    params.lambda = doc.at("lambda").get<double>();
    auto read_bank = [](const nlohmann::json& arr) {
        std::vector<ClassGaussian> bank;
        for (const auto& cls : arr) {
            bank.emplace_back(cls.at("mu").get<double>(), cls.at("sigma").get<double>());
        }
        return bank;
    };
    params.pos = read_bank(doc.at("pos"));
    params.neg = read_bank(doc.at("neg"));
    params.validate();
    return params;
}

nlohmann::ordered_json report_to_json(const SeparabilityReport& report) {
    nlohmann::ordered_json doc;
    doc["per_class"] = nlohmann::ordered_json::array();
    for (const ClassSeparability& c : report.per_class) {
        nlohmann::ordered_json entry;
        entry["class_id"] = c.class_id;
        entry["compactness"] = c.compactness;
        entry["separability"] = c.separability;
        entry["ratio"] = c.ratio;
        doc["per_class"].push_back(std::move(entry));
    }
    doc["fitted"] = nlohmann::ordered_json::array();
    for (const EmpiricalGaussian& g : report.fitted) {
        nlohmann::ordered_json entry;
        entry["mu"] = g.mu;
        entry["sigma"] = g.sigma;
        entry["n"] = g.n;
        doc["fitted"].push_back(std::move(entry));
    }
    doc["mean_compactness"] = report.mean_compactness();
    doc["mean_separability"] = report.mean_separability();
    doc["mean_ratio"] = report.mean_ratio();
    return doc;
}

std::string report_to_csv(const SeparabilityReport& report) {
    std::ostringstream out;
    out << "class_id,compactness,separability,ratio,fit_mu,fit_sigma,fit_n\n";
    for (std::size_t i = 0; i < report.per_class.size(); ++i) {
        const ClassSeparability& c = report.per_class[i];
        const EmpiricalGaussian& g = report.fitted[i];
        out << c.class_id << ',' << format_double(c.compactness) << ','
            << format_double(c.separability) << ',' << format_double(c.ratio) << ','
            << format_double(g.mu) << ',' << format_double(g.sigma) << ',' << g.n
            << '\n';
    }
    return out.str();
}

nlohmann::ordered_json model_to_json(const TrainResult& result) {
    nlohmann::ordered_json doc;
    doc["loss_mode"] = to_string(result.loss_mode);
    doc["layers"] = nlohmann::ordered_json::array();
    for (const DenseLayer& layer : result.model.layers()) {
        nlohmann::ordered_json l;
        l["in"] = layer.in;
        l["out"] = layer.out;
        l["weights"] = layer.weights;
        l["bias"] = layer.bias;
        doc["layers"].push_back(std::move(l));
    }
    doc["predictor"] =
        result.predictor ? predictor_to_json(*result.predictor)
                         : nlohmann::ordered_json(nullptr);
    doc["dual_predictor"] =
        result.dual_predictor ? dual_predictor_to_json(*result.dual_predictor)
                              : nlohmann::ordered_json(nullptr);
    return doc;
}

std::string history_to_csv(const std::vector<EpochRecord>& history,
                           const std::string& metric_name) {
    std::ostringstream out;
    out << "epoch,lr,train_loss,train_" << metric_name << ",test_" << metric_name
        << "\n";
    for (const EpochRecord& r : history) {
        out << r.epoch << ',' << format_double(r.lr) << ','
            << format_double(r.train_loss) << ',' << format_double(r.train_metric)
            << ',' << format_double(r.test_metric) << '\n';
    }
    return out.str();
}

std::string feature_dump_to_csv(const FeatureDump& dump) {
    std::ostringstream out;
    out << "class_id";
    for (std::size_t i = 0; i < dump.num_outputs; ++i) out << ",x_" << i;
    out << '\n';
    for (const auto& [class_id, values] : dump.rows) {
        out << class_id;
        for (double v : values) out << ',' << format_double(v);
        out << '\n';
    }
    return out.str();
}

FeatureDump feature_dump_from_csv(const std::string& text) {
    FeatureDump dump;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() < 2) {
            throw DataError("feature dump: line " + std::to_string(line_no) +
                            " has fewer than 2 columns");
        }
        long class_id = 0;
        if (!parse_long(fields[0], class_id)) {
            if (line_no == 1) continue; // header
            throw DataError("feature dump: bad class id on line " +
                            std::to_string(line_no));
        }
        std::vector<double> values(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            if (!parse_double(fields[i], values[i - 1])) {
                throw DataError("feature dump: bad value on line " +
                                std::to_string(line_no));
            }
        }
        if (dump.num_outputs == 0) {
            dump.num_outputs = values.size();
        } else if (values.size() != dump.num_outputs) {
            throw DataError("feature dump: ragged row on line " +
                            std::to_string(line_no));
        }
        dump.rows.emplace_back(static_cast<int>(class_id), std::move(values));
    }
    if (dump.rows.empty()) {
        throw DataError("feature dump: no data rows");
    }
    return dump;
}

FeatureDump feature_dump_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw DataError("feature dump JSON must map class ids to sample arrays");
    }
    FeatureDump dump;
    dump.num_outputs = 1;
    for (const auto& [key, arr] : doc.items()) {
        long class_id = 0;
        if (!parse_long(key, class_id) || !arr.is_array()) {
            throw DataError("feature dump JSON: bad entry for key '" + key + "'");
        }
        for (const auto& v : arr) {
            dump.rows.emplace_back(static_cast<int>(class_id),
                                   std::vector<double>{v.get<double>()});
        }
    }
    if (dump.rows.empty()) {
        throw DataError("feature dump JSON: no samples");
    }
    return dump;
}

std::vector<PredictionRecord> predictions_from_csv(const std::string& text) {
    std::vector<PredictionRecord> records;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 4) {
            throw DataError("predictions: line " + std::to_string(line_no) +
                            " needs 4 columns (item_id,class_id,score,label)");
        }
        PredictionRecord rec;
        long class_id = 0, label = 0;
        if (!parse_long(fields[0], rec.item_id)) {
            if (line_no == 1) continue; // header
            throw DataError("predictions: bad item id on line " +
                            std::to_string(line_no));
        }
        if (!parse_long(fields[1], class_id) || !parse_double(fields[2], rec.score) ||
            !parse_long(fields[3], label)) {
            throw DataError("predictions: bad field on line " + std::to_string(line_no));
        }
        if (label != 0 && label != 1) {
            throw DataError("predictions: label must be 0 or 1 on line " +
                            std::to_string(line_no));
        }
        rec.class_id = static_cast<int>(class_id);
        rec.label = static_cast<int>(label);
        records.push_back(rec);
    }
    if (records.empty()) {
        throw DataError("predictions: no data rows");
    }
    return records;
}

} // namespace gsoftmax
