#include "gsoftmax/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gsoftmax/errors.hpp"
#include "gsoftmax/ranking_metrics.hpp"

namespace gsoftmax {

bool loss_mode_is_dual(LossMode mode) {
    return mode == LossMode::dual_sigmoid || mode == LossMode::gsoftmax_multilabel;
}

bool loss_mode_is_multilabel(LossMode mode) {
    return mode == LossMode::msml || loss_mode_is_dual(mode);
}

std::string to_string(LossMode mode) {
    switch (mode) {
        case LossMode::softmax: return "softmax";
        case LossMode::gsoftmax: return "gsoftmax";
        case LossMode::msml: return "msml";
        case LossMode::dual_sigmoid: return "dual_sigmoid";
        case LossMode::gsoftmax_multilabel: return "gsoftmax_multilabel";
    }
    return "unknown";
}

LossMode loss_mode_from_string(const std::string& name) {
    if (name == "softmax") return LossMode::softmax;
    if (name == "gsoftmax") return LossMode::gsoftmax;
    if (name == "msml") return LossMode::msml;
    if (name == "dual_sigmoid") return LossMode::dual_sigmoid;
    if (name == "gsoftmax_multilabel") return LossMode::gsoftmax_multilabel;
    throw ValidationError("unknown loss mode: " + name);
}

double schedule_rate(const LrSchedule& schedule, int epoch, int max_epoch) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ScheduleSpec>) {
                return rate_at(s, epoch);
            } else if constexpr (std::is_same_v<T, std::vector<StairStep>>) {
                return staircase_rate(s, epoch);
            } else {
                return linspace_rate(s.start, s.end, s.base_rate, max_epoch, epoch);
            }
        },
        schedule);
}

namespace {

double sigmoid(double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
}

std::size_t argmax_index(std::span<const double> v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

/// Class scores for prediction/ranking: softmax (or augmented softmax)
/// probabilities for the single-label heads, per-class sigmoids for the
/// multi-label heads (positive bank only for the dual heads).
std::vector<double> class_scores(const TrainResult& result,
                                 std::span<const double> logits) {
    switch (result.loss_mode) {
        case LossMode::softmax:
            return softmax(logits);
        case LossMode::gsoftmax:
            return gsoftmax_forward(logits, result.predictor.value());
        case LossMode::msml: {
            std::vector<double> s(logits.size());
            for (std::size_t i = 0; i < logits.size(); ++i) s[i] = sigmoid(logits[i]);
            return s;
        }
        case LossMode::dual_sigmoid: {
            const std::size_t m = logits.size() / 2;
            std::vector<double> s(m);
            for (std::size_t i = 0; i < m; ++i) s[i] = sigmoid(logits[i]);
            return s;
        }
        case LossMode::gsoftmax_multilabel: {
            const DualPredictorParams& params = result.dual_predictor.value();
            const std::size_t m = logits.size() / 2;
            std::vector<double> s(m);
            for (std::size_t i = 0; i < m; ++i) {
                const double u =
                    logits[i] +
                    params.lambda * gaussian_cdf(logits[i], params.pos[i].params());
                s[i] = sigmoid(u);
            }
            return s;
        }
    }
    throw std::logic_error("unhandled loss mode");
}

/// Velocity buffers matched to every trainable parameter.
struct Velocities {
    MlpGradients net;
    std::vector<double> mu, log_sigma;
    std::vector<double> mu_pos, log_sigma_pos, mu_neg, log_sigma_neg;
    double lambda = 0.0;
};

/// Per-batch gradient accumulators (summed over samples, scaled to a mean).
struct BatchGrads {
    MlpGradients net;
    std::vector<double> mu, log_sigma;
    std::vector<double> mu_pos, log_sigma_pos, mu_neg, log_sigma_neg;
    double lambda = 0.0;

    void zero() {
        net.zero();
        auto clear = [](std::vector<double>& v) { std::fill(v.begin(), v.end(), 0.0); };
        clear(mu);
        clear(log_sigma);
        clear(mu_pos);
        clear(log_sigma_pos);
        clear(mu_neg);
        clear(log_sigma_neg);
        lambda = 0.0;
    }
};

void sgd_step(double& w, double& v, double grad, double lr, double momentum,
              double decay) {
    v = momentum * v - lr * (grad + decay * w);
    w += v;
}

/// Loss + d(loss)/d(logits) for one sample. Distribution-parameter gradients
/// (already chained onto log sigma) are summed into `batch`.
double sample_backward(const TrainOptions& options, TrainResult& result,
                       std::span<const double> logits, int label,
                       BatchGrads& batch, std::vector<double>& d_logits) {
    const std::size_t m =
        loss_mode_is_dual(options.loss_mode) ? logits.size() / 2 : logits.size();
    std::vector<double> y(m, 0.0);
    y[static_cast<std::size_t>(label)] = 1.0;

    switch (options.loss_mode) {
        case LossMode::softmax: {
            const PredictionVector p = softmax(logits);
            d_logits.assign(p.begin(), p.end());
            double dot = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                d_logits[i] -= y[i];
                dot += y[i] * logits[i];
            }
            return log_sum_exp(logits) - dot;
        }
        case LossMode::gsoftmax: {
            const PredictorParams& params = result.predictor.value();
            BackwardResult b = gsoftmax_backward(logits, y, params);
            d_logits = std::move(b.grads.d_x);
            for (std::size_t i = 0; i < m; ++i) {
                batch.mu[i] += b.grads.d_mu[i];
                batch.log_sigma[i] += b.grads.d_sigma[i] * params.classes[i].sigma();
            }
            if (options.predictor.learn_lambda) {
                batch.lambda += gsoftmax_lambda_grad(logits, y, params);
            }
            return b.loss;
        }
        case LossMode::msml: {
            MsmlResult r = msml_loss(logits, y);
            d_logits = std::move(r.d_x);
            return r.loss;
        }
        case LossMode::dual_sigmoid: {
            DualFeatureVector f;
            f.pos.assign(logits.begin(), logits.begin() + m);
            f.neg.assign(logits.begin() + m, logits.end());
            DualSigmoidResult r = dual_sigmoid_loss(f, y);
            d_logits.resize(2 * m);
            for (std::size_t i = 0; i < m; ++i) {
                d_logits[i] = r.d_pos[i];
                d_logits[m + i] = r.d_neg[i];
            }
            return r.loss;
        }
        case LossMode::gsoftmax_multilabel: {
            const DualPredictorParams& params = result.dual_predictor.value();
            DualFeatureVector f;
            f.pos.assign(logits.begin(), logits.begin() + m);
            f.neg.assign(logits.begin() + m, logits.end());
            DualBackwardResult b = gsoftmax_multilabel_loss(f, y, params);
            d_logits.resize(2 * m);
            for (std::size_t i = 0; i < m; ++i) {
                d_logits[i] = b.grads.d_pos[i];
                d_logits[m + i] = b.grads.d_neg[i];
                batch.mu_pos[i] += b.grads.d_mu_pos[i];
                batch.log_sigma_pos[i] += b.grads.d_sigma_pos[i] * params.pos[i].sigma();
                batch.mu_neg[i] += b.grads.d_mu_neg[i];
                batch.log_sigma_neg[i] += b.grads.d_sigma_neg[i] * params.neg[i].sigma();
            }
            if (options.predictor.learn_lambda) {
                batch.lambda += dual_lambda_grad(f, y, params);
            }
            return b.loss;
        }
    }
    throw std::logic_error("unhandled loss mode");
}

} // namespace

std::vector<double> per_class_average_precision(const TrainResult& result,
                                                const Dataset& data) {
    RankedPredictions ranked;
    ranked.per_class.assign(data.num_classes, {});
    for (auto& v : ranked.per_class) v.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::vector<double> logits = result.model.predict_logits(data.features[i]);
        const std::vector<double> s = class_scores(result, logits);
        for (std::size_t c = 0; c < data.num_classes; ++c) {
            ranked.per_class[c].push_back(
                {s[c], data.labels[i] == static_cast<int>(c)});
        }
    }
    return mean_average_precision(ranked).per_class_ap;
}

double evaluate_metric(const TrainResult& result, const Dataset& data) {
    if (data.size() == 0) {
        throw std::domain_error("evaluate_metric: empty dataset");
    }
    if (loss_mode_is_multilabel(result.loss_mode)) {
        RankedPredictions ranked;
        ranked.per_class.assign(data.num_classes, {});
        for (std::size_t i = 0; i < data.size(); ++i) {
            const std::vector<double> logits =
                result.model.predict_logits(data.features[i]);
            const std::vector<double> s = class_scores(result, logits);
            for (std::size_t c = 0; c < data.num_classes; ++c) {
                ranked.per_class[c].push_back(
                    {s[c], data.labels[i] == static_cast<int>(c)});
            }
        }
        return mean_average_precision(ranked).mean;
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::vector<double> logits = result.model.predict_logits(data.features[i]);
        const std::vector<double> s = class_scores(result, logits);
        if (static_cast<int>(argmax_index(s)) == data.labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

TrainResult train(const MlpConfig& model_config, const TrainOptions& options,
                  const Dataset& train_data, const Dataset& test_data) {
    model_config.validate();
    if (options.epochs < 1) throw std::domain_error("train: epochs must be >= 1");
    if (options.batch_size < 1) throw std::domain_error("train: batch size must be >= 1");
    if (train_data.size() == 0) throw std::domain_error("train: empty training set");

    const std::size_t m = train_data.num_classes;
    const std::size_t expected_outputs = loss_mode_is_dual(options.loss_mode) ? 2 * m : m;
    if (static_cast<std::size_t>(model_config.output_dim) != expected_outputs) {
        throw std::domain_error("train: output_dim must be " +
                                std::to_string(expected_outputs) + " for loss mode " +
                                to_string(options.loss_mode));
    }
    if (train_data.feature_dim != static_cast<std::size_t>(model_config.input_dim)) {
        throw std::domain_error("train: input_dim does not match dataset");
    }

    TrainResult result{options.loss_mode, Mlp(model_config),
                       std::nullopt,      std::nullopt,
                       {},                ""};
    result.metric_name = loss_mode_is_multilabel(options.loss_mode) ? "map" : "accuracy";
    if (options.loss_mode == LossMode::gsoftmax) {
        result.predictor = PredictorParams::uniform_init(
            m, options.predictor.lambda, options.predictor.mu_init,
            options.predictor.sigma_init);
    } else if (options.loss_mode == LossMode::gsoftmax_multilabel) {
        result.dual_predictor = DualPredictorParams::uniform_init(
            m, options.predictor.lambda, options.predictor.mu_init,
            options.predictor.sigma_init);
    }

    Velocities vel;
    vel.net = result.model.zero_gradients();
    BatchGrads batch;
    batch.net = result.model.zero_gradients();
    if (result.predictor) {
        vel.mu.assign(m, 0.0);
        vel.log_sigma.assign(m, 0.0);
        batch.mu.assign(m, 0.0);
        batch.log_sigma.assign(m, 0.0);
    }
    if (result.dual_predictor) {
        vel.mu_pos.assign(m, 0.0);
        vel.log_sigma_pos.assign(m, 0.0);
        vel.mu_neg.assign(m, 0.0);
        vel.log_sigma_neg.assign(m, 0.0);
        batch.mu_pos.assign(m, 0.0);
        batch.log_sigma_pos.assign(m, 0.0);
        batch.mu_neg.assign(m, 0.0);
        batch.log_sigma_neg.assign(m, 0.0);
    }

    std::mt19937_64 shuffle_rng(options.shuffle_seed);
    std::vector<std::size_t> order(train_data.size());
    std::iota(order.begin(), order.end(), 0);

    const double momentum = options.optimizer.momentum;
    const double decay = options.optimizer.weight_decay;
    const double dist_decay =
        options.predictor.weight_decay_on_distribution ? decay : 0.0;

    std::vector<std::vector<double>> acts;
    std::vector<double> d_logits;

    for (int epoch = 1; epoch <= options.epochs; ++epoch) {
        const double lr = schedule_rate(options.schedule, epoch, options.epochs);
        const double predictor_lr = lr * options.predictor.lr_multiplier;
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        double loss_sum = 0.0;
        std::size_t step = 0;
        for (std::size_t begin = 0; begin < order.size();
             begin += static_cast<std::size_t>(options.batch_size), ++step) {
            const std::size_t end = std::min(
                order.size(), begin + static_cast<std::size_t>(options.batch_size));
            const double batch_n = static_cast<double>(end - begin);
            batch.zero();

            for (std::size_t k = begin; k < end; ++k) {
                const std::size_t idx = order[k];
                result.model.forward(train_data.features[idx], acts);
                loss_sum += sample_backward(options, result, acts.back(),
                                            train_data.labels[idx], batch, d_logits);
                result.model.backward(acts, d_logits, batch.net);
            }
            if (!std::isfinite(loss_sum)) {
                throw NumericError("train: loss diverged at epoch " +
                                   std::to_string(epoch) + ", step " +
                                   std::to_string(step));
            }
            batch.net.scale(1.0 / batch_n);

            for (std::size_t l = 0; l < result.model.layers().size(); ++l) {
                DenseLayer& layer = result.model.layers()[l];
                for (std::size_t i = 0; i < layer.weights.size(); ++i) {
                    sgd_step(layer.weights[i], vel.net.d_weights[l][i],
                             batch.net.d_weights[l][i], lr, momentum, decay);
                }
                for (std::size_t i = 0; i < layer.bias.size(); ++i) {
                    sgd_step(layer.bias[i], vel.net.d_bias[l][i],
                             batch.net.d_bias[l][i], lr, momentum, decay);
                }
            }

            if (result.predictor) {
                PredictorParams& p = *result.predictor;
                for (std::size_t i = 0; i < m; ++i) {
                    double mu = p.classes[i].mu();
                    double ls = p.classes[i].log_sigma();
                    sgd_step(mu, vel.mu[i], batch.mu[i] / batch_n, predictor_lr,
                             momentum, dist_decay);
                    sgd_step(ls, vel.log_sigma[i], batch.log_sigma[i] / batch_n,
                             predictor_lr, momentum, dist_decay);
                    p.classes[i].set_mu(mu);
                    p.classes[i].set_log_sigma(ls);
                }
                if (options.predictor.learn_lambda) {
                    sgd_step(p.lambda, vel.lambda, batch.lambda / batch_n,
                             predictor_lr, momentum, dist_decay);
                    if (p.lambda < 0.0) p.lambda = 0.0;
                }
            }
            if (result.dual_predictor) {
                DualPredictorParams& p = *result.dual_predictor;
                auto update_bank = [&](std::vector<ClassGaussian>& bank,
                                       std::vector<double>& vmu, std::vector<double>& vls,
                                       std::vector<double>& gmu,
                                       std::vector<double>& gls) {
                    for (std::size_t i = 0; i < m; ++i) {
                        double mu = bank[i].mu();
                        double ls = bank[i].log_sigma();
                        sgd_step(mu, vmu[i], gmu[i] / batch_n, predictor_lr, momentum,
                                 dist_decay);
                        sgd_step(ls, vls[i], gls[i] / batch_n, predictor_lr, momentum,
                                 dist_decay);
                        bank[i].set_mu(mu);
                        bank[i].set_log_sigma(ls);
                    }
                };
                update_bank(p.pos, vel.mu_pos, vel.log_sigma_pos, batch.mu_pos,
                            batch.log_sigma_pos);
                update_bank(p.neg, vel.mu_neg, vel.log_sigma_neg, batch.mu_neg,
                            batch.log_sigma_neg);
                if (options.predictor.learn_lambda) {
                    sgd_step(p.lambda, vel.lambda, batch.lambda / batch_n,
                             predictor_lr, momentum, dist_decay);
                    if (p.lambda < 0.0) p.lambda = 0.0;
                }
            }
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.lr = lr;
        rec.train_loss = loss_sum / static_cast<double>(train_data.size());
        rec.train_metric = evaluate_metric(result, train_data);
        rec.test_metric = evaluate_metric(result, test_data);
        result.history.push_back(rec);
    }
    return result;
}

FeatureDump export_features(const Mlp& model, const Dataset& data) {
    FeatureDump dump;
    dump.num_outputs = static_cast<std::size_t>(model.config().output_dim);
    dump.rows.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        dump.rows.emplace_back(data.labels[i], model.predict_logits(data.features[i]));
    }
    return dump;
}

} // namespace gsoftmax
