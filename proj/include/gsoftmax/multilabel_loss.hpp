#ifndef GSOFTMAX_MULTILABEL_LOSS_HPP
#define GSOFTMAX_MULTILABEL_LOSS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "gsoftmax/gsoftmax.hpp"

namespace gsoftmax {

/// Positive/negative feature banks for multi-label prediction: pos[i] scores
/// membership in class i, neg[i] scores non-membership.
struct DualFeatureVector {
    std::vector<double> pos;
    std::vector<double> neg;

    std::size_t num_classes() const { return pos.size(); }
    void validate() const;
};

/// One Gaussian per class for each feature bank, plus the shared lambda.
struct DualPredictorParams {
    double lambda = 1.0;
    std::vector<ClassGaussian> pos;
    std::vector<ClassGaussian> neg;

    std::size_t num_classes() const { return pos.size(); }

    static DualPredictorParams uniform_init(std::size_t m, double lambda = 1.0,
                                            double mu0 = 0.0, double sigma0 = 1.0);
    void validate() const;
};

/// Numerically stable log(sigmoid(v)) and log(1 - sigmoid(v)).
double log_sigmoid(double v);
double log_one_minus_sigmoid(double v);

struct MsmlResult {
    double loss = 0.0;
    std::vector<double> d_x;
};

/// Multi-label soft margin loss: independent per-class logistic cross entropy
/// -sum_i [y_i log s(x_i) + (1 - y_i) log(1 - s(x_i))]. Gradient is
/// s(x_i) - y_i. Labels must be exactly 0 or 1.
MsmlResult msml_loss(std::span<const double> x, std::span<const double> y);

struct DualSigmoidResult {
    double loss = 0.0;
    std::vector<double> d_pos;
    std::vector<double> d_neg;
};

/// Two-bank variant scoring both banks through log(sigmoid):
/// -sum_i [y_i log s(x_i+) + (1 - y_i) log s(x_i-)].
DualSigmoidResult dual_sigmoid_loss(const DualFeatureVector& f,
                                    std::span<const double> y);

struct DualGradBundle {
    std::vector<double> d_pos;
    std::vector<double> d_neg;
    std::vector<double> d_mu_pos;
    std::vector<double> d_sigma_pos;
    std::vector<double> d_mu_neg;
    std::vector<double> d_sigma_neg;
};

struct DualBackwardResult {
    double loss = 0.0;
    DualGradBundle grads;
};

/// Gaussian-augmented multi-label loss over u_i+- = x_i+- + lambda * Phi_i+-:
/// -sum_i [y_i log s(u_i+) + (1 - y_i) log(1 - s(u_i-))]. Note the negative
/// bank goes through log(1 - s), unlike dual_sigmoid_loss; both forms are
/// kept as written. With lambda == 0 the loss and feature gradients are
/// bit-identical to the same expression on raw features, and all
/// distribution-parameter gradients are exactly zero.
DualBackwardResult gsoftmax_multilabel_loss(const DualFeatureVector& f,
                                            std::span<const double> y,
                                            const DualPredictorParams& params);

/// Lambda gradient of gsoftmax_multilabel_loss (for trainable lambda).
double dual_lambda_grad(const DualFeatureVector& f, std::span<const double> y,
                        const DualPredictorParams& params);

} // namespace gsoftmax

#endif
