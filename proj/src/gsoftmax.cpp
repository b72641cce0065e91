#include "gsoftmax/gsoftmax.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsoftmax {
namespace {

void check_vector(std::span<const double> x, const char* who) {
    if (x.size() < 2) {
        throw std::domain_error(std::string(who) + ": need at least 2 classes");
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw std::domain_error(std::string(who) + ": non-finite entry");
        }
    }
}

void check_one_hot(std::span<const double> y) {
    double sum = 0.0;
    for (double v : y) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::domain_error("cross_entropy: label entries must lie in [0, 1]");
        }
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw std::domain_error("cross_entropy: labels must sum to 1");
    }
}

} // namespace

ClassGaussian::ClassGaussian(double mu, double sigma) : mu_(mu), sigma_(sigma) {
    if (!std::isfinite(mu) || !std::isfinite(sigma) || sigma <= 0.0) {
        throw std::domain_error("ClassGaussian: sigma must be finite and > 0");
    }
    log_sigma_ = std::log(sigma);
}

void ClassGaussian::set_log_sigma(double log_sigma) {
    if (!std::isfinite(log_sigma)) {
        throw std::domain_error("ClassGaussian: non-finite log_sigma");
    }
    log_sigma_ = log_sigma;
    sigma_ = std::exp(log_sigma);
}

PredictorParams PredictorParams::uniform_init(std::size_t m, double lambda,
                                              double mu0, double sigma0) {
    PredictorParams p;
    p.lambda = lambda;
    p.classes.assign(m, ClassGaussian(mu0, sigma0));
    p.validate();
    return p;
}

void PredictorParams::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::domain_error("PredictorParams: lambda must be >= 0");
    }
    if (classes.size() < 2) {
        throw std::domain_error("PredictorParams: need at least 2 classes");
    }
}

PredictionVector softmax(std::span<const double> x) {
    check_vector(x, "softmax");
    const double mx = *std::max_element(x.begin(), x.end());
    PredictionVector p(x.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        p[i] = std::exp(x[i] - mx);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

std::vector<double> gsoftmax_logits(std::span<const double> x,
                                    const PredictorParams& params) {
    params.validate();
    if (x.size() != params.num_classes()) {
        throw std::invalid_argument("gsoftmax: feature/class count mismatch");
    }
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        z[i] = x[i] + params.lambda * gaussian_cdf(x[i], params.classes[i].params());
    }
    return z;
}

PredictionVector gsoftmax_forward(std::span<const double> x,
                                  const PredictorParams& params) {
    return softmax(gsoftmax_logits(x, params));
}

double cross_entropy(std::span<const double> p, std::span<const double> y) {
    if (p.size() != y.size()) {
        throw std::invalid_argument("cross_entropy: length mismatch");
    }
    check_one_hot(y);
    double loss = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (y[i] == 0.0) continue;
        if (!(p[i] > 0.0)) {
            throw std::domain_error("cross_entropy: zero probability on a labeled class");
        }
        loss -= y[i] * std::log(p[i]);
    }
    return loss;
}

double log_sum_exp(std::span<const double> x) {
    const double mx = *std::max_element(x.begin(), x.end());
    double sum = 0.0;
    for (double v : x) sum += std::exp(v - mx);
    return mx + std::log(sum);
}

BackwardResult gsoftmax_backward(std::span<const double> x,
                                 std::span<const double> y,
                                 const PredictorParams& params) {
    const std::vector<double> z = gsoftmax_logits(x, params);
    check_vector(z, "gsoftmax_backward");
    if (y.size() != x.size()) {
        throw std::invalid_argument("gsoftmax_backward: label length mismatch");
    }
    check_one_hot(y);

    const PredictionVector p = softmax(z);
    const double lse = log_sum_exp(z);

    BackwardResult out;
    // Fused form of -sum y_i log p_i: since sum y_i == 1, this is
    // lse - sum y_i z_i, which never takes log of an underflowed probability.
    double dot = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) dot += y[i] * z[i];
    out.loss = lse - dot;

    const std::size_t m = x.size();
    out.grads.d_x.resize(m);
    out.grads.d_mu.resize(m);
    out.grads.d_sigma.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double kernel = p[i] - y[i];
        const CdfGrads cg = gaussian_cdf_grads(x[i], params.classes[i].params());
        out.grads.d_x[i] = kernel * (1.0 + params.lambda * cg.d_x);
        out.grads.d_mu[i] = kernel * params.lambda * cg.d_mu;
        out.grads.d_sigma[i] = kernel * params.lambda * cg.d_sigma;
    }
    return out;
}

double gsoftmax_lambda_grad(std::span<const double> x,
                            std::span<const double> y,
                            const PredictorParams& params) {
    const std::vector<double> z = gsoftmax_logits(x, params);
    const PredictionVector p = softmax(z);
    double g = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        g += (p[i] - y[i]) * gaussian_cdf(x[i], params.classes[i].params());
    }
    return g;
}

} // namespace gsoftmax
