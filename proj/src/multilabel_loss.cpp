#include "gsoftmax/multilabel_loss.hpp"

#include <cmath>
#include <stdexcept>

namespace gsoftmax {
namespace {

double sigmoid(double v) {
    if (v >= 0.0) {
        return 1.0 / (1.0 + std::exp(-v));
    }
    const double e = std::exp(v);
    return e / (1.0 + e);
}

double softplus(double v) {
    // log(1 + exp(v)) without overflow.
    return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
}

void check_features(std::span<const double> x, const char* who) {
    if (x.empty()) {
        throw std::domain_error(std::string(who) + ": empty feature vector");
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw std::domain_error(std::string(who) + ": non-finite feature");
        }
    }
}

void check_binary_labels(std::span<const double> y, std::size_t m, const char* who) {
    if (y.size() != m) {
        throw std::invalid_argument(std::string(who) + ": label length mismatch");
    }
    for (double v : y) {
        if (v != 0.0 && v != 1.0) {
            throw std::domain_error(std::string(who) + ": labels must be 0 or 1");
        }
    }
}

} // namespace

void DualFeatureVector::validate() const {
    check_features(pos, "DualFeatureVector");
    if (neg.size() != pos.size()) {
        throw std::invalid_argument("DualFeatureVector: pos/neg length mismatch");
    }
    check_features(neg, "DualFeatureVector");
}

DualPredictorParams DualPredictorParams::uniform_init(std::size_t m, double lambda,
                                                      double mu0, double sigma0) {
    DualPredictorParams p;
    p.lambda = lambda;
    p.pos.assign(m, ClassGaussian(mu0, sigma0));
    p.neg.assign(m, ClassGaussian(mu0, sigma0));
    p.validate();
    return p;
}

void DualPredictorParams::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::domain_error("DualPredictorParams: lambda must be >= 0");
    }
    if (pos.empty() || pos.size() != neg.size()) {
        throw std::invalid_argument("DualPredictorParams: pos/neg class count mismatch");
    }
}

double log_sigmoid(double v) { return -softplus(-v); }

double log_one_minus_sigmoid(double v) { return -softplus(v); }

MsmlResult msml_loss(std::span<const double> x, std::span<const double> y) {
    check_features(x, "msml_loss");
    check_binary_labels(y, x.size(), "msml_loss");
    MsmlResult out;
    out.d_x.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.loss -= y[i] * log_sigmoid(x[i]) + (1.0 - y[i]) * log_one_minus_sigmoid(x[i]);
        out.d_x[i] = sigmoid(x[i]) - y[i];
    }
    return out;
}

DualSigmoidResult dual_sigmoid_loss(const DualFeatureVector& f,
                                    std::span<const double> y) {
    f.validate();
    const std::size_t m = f.num_classes();
    check_binary_labels(y, m, "dual_sigmoid_loss");
    DualSigmoidResult out;
    out.d_pos.resize(m);
    out.d_neg.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        out.loss -= y[i] * log_sigmoid(f.pos[i]) + (1.0 - y[i]) * log_sigmoid(f.neg[i]);
        out.d_pos[i] = y[i] * (sigmoid(f.pos[i]) - 1.0);
        out.d_neg[i] = (1.0 - y[i]) * (sigmoid(f.neg[i]) - 1.0);
    }
    return out;
}

DualBackwardResult gsoftmax_multilabel_loss(const DualFeatureVector& f,
                                            std::span<const double> y,
                                            const DualPredictorParams& params) {
    f.validate();
    params.validate();
    const std::size_t m = f.num_classes();
    if (params.num_classes() != m) {
        throw std::invalid_argument("gsoftmax_multilabel_loss: class count mismatch");
    }
    check_binary_labels(y, m, "gsoftmax_multilabel_loss");

    DualBackwardResult out;
    auto& g = out.grads;
    g.d_pos.resize(m);
    g.d_neg.resize(m);
    g.d_mu_pos.resize(m);
    g.d_sigma_pos.resize(m);
    g.d_mu_neg.resize(m);
    g.d_sigma_neg.resize(m);

    for (std::size_t i = 0; i < m; ++i) {
        const GaussianParams gp = params.pos[i].params();
        const GaussianParams gn = params.neg[i].params();
        const double u_pos = f.pos[i] + params.lambda * gaussian_cdf(f.pos[i], gp);
        const double u_neg = f.neg[i] + params.lambda * gaussian_cdf(f.neg[i], gn);

        out.loss -= y[i] * log_sigmoid(u_pos) +
                    (1.0 - y[i]) * log_one_minus_sigmoid(u_neg);

        // d loss / d u for each bank, then chain through u = x + lambda*Phi.
        const double du_pos = y[i] * (sigmoid(u_pos) - 1.0);
        const double du_neg = (1.0 - y[i]) * sigmoid(u_neg);

        const CdfGrads cp = gaussian_cdf_grads(f.pos[i], gp);
        const CdfGrads cn = gaussian_cdf_grads(f.neg[i], gn);

        g.d_pos[i] = du_pos * (1.0 + params.lambda * cp.d_x);
        g.d_mu_pos[i] = du_pos * params.lambda * cp.d_mu;
        g.d_sigma_pos[i] = du_pos * params.lambda * cp.d_sigma;

        g.d_neg[i] = du_neg * (1.0 + params.lambda * cn.d_x);
        g.d_mu_neg[i] = du_neg * params.lambda * cn.d_mu;
        g.d_sigma_neg[i] = du_neg * params.lambda * cn.d_sigma;
    }
    return out;
}

double dual_lambda_grad(const DualFeatureVector& f, std::span<const double> y,
                        const DualPredictorParams& params) {
    f.validate();
    params.validate();
    const std::size_t m = f.num_classes();
    check_binary_labels(y, m, "dual_lambda_grad");
    double out = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double phi_pos = gaussian_cdf(f.pos[i], params.pos[i].params());
        const double phi_neg = gaussian_cdf(f.neg[i], params.neg[i].params());
        const double u_pos = f.pos[i] + params.lambda * phi_pos;
        const double u_neg = f.neg[i] + params.lambda * phi_neg;
        out += y[i] * (sigmoid(u_pos) - 1.0) * phi_pos +
               (1.0 - y[i]) * sigmoid(u_neg) * phi_neg;
    }
    return out;
}

} // namespace gsoftmax
