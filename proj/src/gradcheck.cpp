#include "gsoftmax/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "gsoftmax/gsoftmax.hpp"
#include "gsoftmax/multilabel_loss.hpp"

namespace gsoftmax {
namespace {

constexpr double kFdStep = 1e-5;

double rel_err(double analytic, double numeric) {
    return std::fabs(analytic - numeric) /
           std::max({1.0, std::fabs(analytic), std::fabs(numeric)});
}

struct BlockTracker {
    GradBlockReport report;

    explicit BlockTracker(std::string name, double tol) {
        report.name = std::move(name);
        report.tolerance = tol;
    }

    void observe(double analytic, double numeric, std::uint64_t trial_seed,
                 std::size_t index) {
        const double e = rel_err(analytic, numeric);
        if (e > report.max_rel_err) {
            report.max_rel_err = e;
            report.worst_seed = trial_seed;
            report.worst_index = index;
        }
    }
};

std::size_t sample_m(std::mt19937_64& rng) {
    static constexpr std::size_t kSizes[] = {2, 10, 100};
    return kSizes[std::uniform_int_distribution<int>(0, 2)(rng)];
}

double sample_lambda(std::mt19937_64& rng) {
    static constexpr double kLambdas[] = {0.0, 0.5, 1.0};
    return kLambdas[std::uniform_int_distribution<int>(0, 2)(rng)];
}

double sample_sigma(std::mt19937_64& rng) {
    // Log-uniform over [0.1, 10].
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
    return std::exp(u(rng));
}

template <typename F>
double central_diff(F&& loss_of, double& slot, double value) {
    slot = value + kFdStep;
    const double up = loss_of();
    slot = value - kFdStep;
    const double down = loss_of();
    slot = value;
    return (up - down) / (2.0 * kFdStep);
}

} // namespace

bool GradCheckReport::passed() const {
    return std::all_of(blocks.begin(), blocks.end(),
                       [](const GradBlockReport& b) { return b.passed(); });
}

const GradBlockReport* GradCheckReport::find(const std::string& name) const {
    for (const auto& b : blocks) {
        if (b.name == name) return &b;
    }
    return nullptr;
}

GradCheckReport check_single_label_gradients(int trials, std::uint64_t seed) {
    if (trials < 1) {
        throw std::domain_error("check_single_label_gradients: trials must be >= 1");
    }
    BlockTracker bx("gsoftmax.d_x", 1e-5);
    BlockTracker bmu("gsoftmax.d_mu", 1e-5);
    BlockTracker bsigma("gsoftmax.d_sigma", 1e-5);

    for (int t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(t);
        std::mt19937_64 rng(trial_seed);
        const std::size_t m = sample_m(rng);
        std::uniform_real_distribution<double> feat(-3.0, 3.0);

        std::vector<double> x(m), mu(m), sigma(m);
        for (auto& v : x) v = feat(rng);
        for (auto& v : mu) v = feat(rng);
        for (auto& v : sigma) v = sample_sigma(rng);
        const double lambda = sample_lambda(rng);
        std::vector<double> y(m, 0.0);
        y[std::uniform_int_distribution<std::size_t>(0, m - 1)(rng)] = 1.0;

        auto make_params = [&] {
            PredictorParams p;
            p.lambda = lambda;
            for (std::size_t i = 0; i < m; ++i) p.classes.emplace_back(mu[i], sigma[i]);
            return p;
        };
        auto loss_of = [&] {
            const PredictorParams p = make_params();
            const std::vector<double> z = gsoftmax_logits(x, p);
            double dot = 0.0;
            for (std::size_t i = 0; i < m; ++i) dot += y[i] * z[i];
            return log_sum_exp(z) - dot;
        };

        const BackwardResult analytic = gsoftmax_backward(x, y, make_params());
        for (std::size_t i = 0; i < m; ++i) {
            bx.observe(analytic.grads.d_x[i], central_diff(loss_of, x[i], x[i]),
                       trial_seed, i);
            bmu.observe(analytic.grads.d_mu[i], central_diff(loss_of, mu[i], mu[i]),
                        trial_seed, i);
            bsigma.observe(analytic.grads.d_sigma[i],
                           central_diff(loss_of, sigma[i], sigma[i]), trial_seed, i);
        }
    }
    return GradCheckReport{{bx.report, bmu.report, bsigma.report}};
}

GradCheckReport check_multilabel_gradients(int trials, std::uint64_t seed) {
    if (trials < 1) {
        throw std::domain_error("check_multilabel_gradients: trials must be >= 1");
    }
    BlockTracker msml_dx("msml.d_x", 1e-6);
    BlockTracker ds_pos("dual_sigmoid.d_pos", 1e-6);
    BlockTracker ds_neg("dual_sigmoid.d_neg", 1e-6);
    BlockTracker g_pos("gsoftmax_multilabel.d_pos", 1e-5);
    BlockTracker g_neg("gsoftmax_multilabel.d_neg", 1e-5);
    BlockTracker g_mu_pos("gsoftmax_multilabel.d_mu_pos", 1e-5);
    BlockTracker g_sigma_pos("gsoftmax_multilabel.d_sigma_pos", 1e-5);
    BlockTracker g_mu_neg("gsoftmax_multilabel.d_mu_neg", 1e-5);
    BlockTracker g_sigma_neg("gsoftmax_multilabel.d_sigma_neg", 1e-5);

    for (int t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = seed + 0x9e3779b97f4a7c15ULL +
                                         static_cast<std::uint64_t>(t);
        std::mt19937_64 rng(trial_seed);
        const std::size_t m = sample_m(rng);
        std::uniform_real_distribution<double> feat(-3.0, 3.0);
        std::bernoulli_distribution coin(0.5);

        DualFeatureVector f;
        f.pos.resize(m);
        f.neg.resize(m);
        for (auto& v : f.pos) v = feat(rng);
        for (auto& v : f.neg) v = feat(rng);
        std::vector<double> mu_pos(m), sg_pos(m), mu_neg(m), sg_neg(m);
        for (std::size_t i = 0; i < m; ++i) {
            mu_pos[i] = feat(rng);
            sg_pos[i] = sample_sigma(rng);
            mu_neg[i] = feat(rng);
            sg_neg[i] = sample_sigma(rng);
        }
        const double lambda = sample_lambda(rng);
        std::vector<double> y(m);
        for (auto& v : y) v = coin(rng) ? 1.0 : 0.0;

        // Plain soft-margin loss.
        {
            const MsmlResult analytic = msml_loss(f.pos, y);
            for (std::size_t i = 0; i < m; ++i) {
                auto loss_of = [&] { return msml_loss(f.pos, y).loss; };
                msml_dx.observe(analytic.d_x[i],
                                central_diff(loss_of, f.pos[i], f.pos[i]), trial_seed, i);
            }
        }
        // Two-bank sigmoid loss.
        {
            const DualSigmoidResult analytic = dual_sigmoid_loss(f, y);
            auto loss_of = [&] { return dual_sigmoid_loss(f, y).loss; };
            for (std::size_t i = 0; i < m; ++i) {
                ds_pos.observe(analytic.d_pos[i],
                               central_diff(loss_of, f.pos[i], f.pos[i]), trial_seed, i);
                ds_neg.observe(analytic.d_neg[i],
                               central_diff(loss_of, f.neg[i], f.neg[i]), trial_seed, i);
            }
        }
        // Gaussian-augmented loss: all six blocks.
        {
            auto make_params = [&] {
                DualPredictorParams p;
                p.lambda = lambda;
                for (std::size_t i = 0; i < m; ++i) {
                    p.pos.emplace_back(mu_pos[i], sg_pos[i]);
                    p.neg.emplace_back(mu_neg[i], sg_neg[i]);
                }
                return p;
            };
            const DualBackwardResult analytic =
                gsoftmax_multilabel_loss(f, y, make_params());
            auto loss_of = [&] {
                return gsoftmax_multilabel_loss(f, y, make_params()).loss;
            };
            for (std::size_t i = 0; i < m; ++i) {
                g_pos.observe(analytic.grads.d_pos[i],
                              central_diff(loss_of, f.pos[i], f.pos[i]), trial_seed, i);
                g_neg.observe(analytic.grads.d_neg[i],
                              central_diff(loss_of, f.neg[i], f.neg[i]), trial_seed, i);
                g_mu_pos.observe(analytic.grads.d_mu_pos[i],
                                 central_diff(loss_of, mu_pos[i], mu_pos[i]), trial_seed,
                                 i);
                g_sigma_pos.observe(analytic.grads.d_sigma_pos[i],
                                    central_diff(loss_of, sg_pos[i], sg_pos[i]),
                                    trial_seed, i);
                g_mu_neg.observe(analytic.grads.d_mu_neg[i],
                                 central_diff(loss_of, mu_neg[i], mu_neg[i]), trial_seed,
                                 i);
                g_sigma_neg.observe(analytic.grads.d_sigma_neg[i],
                                    central_diff(loss_of, sg_neg[i], sg_neg[i]),
                                    trial_seed, i);
            }
        }
    }
    return GradCheckReport{{msml_dx.report, ds_pos.report, ds_neg.report, g_pos.report,
                            g_neg.report, g_mu_pos.report, g_sigma_pos.report,
                            g_mu_neg.report, g_sigma_neg.report}};
}

GradCheckReport run_full_gradcheck(int trials, std::uint64_t seed) {
    GradCheckReport all = check_single_label_gradients(trials, seed);
    GradCheckReport ml = check_multilabel_gradients(trials, seed);
    all.blocks.insert(all.blocks.end(), ml.blocks.begin(), ml.blocks.end());
    return all;
}

} // namespace gsoftmax
