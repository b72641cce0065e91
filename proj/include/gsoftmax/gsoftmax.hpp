#ifndef GSOFTMAX_GSOFTMAX_HPP
#define GSOFTMAX_GSOFTMAX_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "gsoftmax/special_fn.hpp"

namespace gsoftmax {

/// Per-class Gaussian of the predictor. Stored as (mu, log sigma) so that
/// gradient steps on log_sigma can never drive sigma non-positive; the sigma
/// value is cached alongside so serialization round-trips exactly.
class ClassGaussian {
public:
    ClassGaussian() : ClassGaussian(0.0, 1.0) {}
    ClassGaussian(double mu, double sigma);

    double mu() const { return mu_; }
    double sigma() const { return sigma_; }
    double log_sigma() const { return log_sigma_; }

    void set_mu(double mu) { mu_ = mu; }
    void set_log_sigma(double log_sigma);

    GaussianParams params() const { return {mu_, sigma_}; }

private:
    double mu_;
    double sigma_;
    double log_sigma_;
};

/// Learnable state of the Gaussian-augmented softmax head: the mixing weight
/// lambda plus one ClassGaussian per class.
struct PredictorParams {
    double lambda = 1.0;
    std::vector<ClassGaussian> classes;

    std::size_t num_classes() const { return classes.size(); }

    /// m classes, all initialized to N(mu0, sigma0^2).
    static PredictorParams uniform_init(std::size_t m, double lambda = 1.0,
                                        double mu0 = 0.0, double sigma0 = 1.0);

    /// Throws std::domain_error unless lambda >= 0 and there are >= 2 classes.
    void validate() const;
};

/// Probability vector over classes: entries in (0, 1), summing to 1.
using PredictionVector = std::vector<double>;

/// Per-sample gradients matched index-for-index to the class list.
struct GradBundle {
    std::vector<double> d_x;
    std::vector<double> d_mu;
    std::vector<double> d_sigma;
};

struct BackwardResult {
    double loss = 0.0;
    GradBundle grads;
};

/// Numerically stable softmax (max-shifted exponentials).
/// Throws std::domain_error for inputs of length < 2 or with non-finite
/// entries.
PredictionVector softmax(std::span<const double> x);

/// Augmented logits x_i + lambda * Phi(x_i; mu_i, sigma_i), exposed because
/// the trainer and the analysis tooling both want them.
std::vector<double> gsoftmax_logits(std::span<const double> x,
                                    const PredictorParams& params);

/// Softmax over the Gaussian-augmented logits. With lambda == 0 the result is
/// bit-identical to softmax(x).
PredictionVector gsoftmax_forward(std::span<const double> x,
                                  const PredictorParams& params);

/// Cross entropy -sum y_i log p_i for a one-hot label vector y.
/// Throws std::domain_error if y does not sum to 1 or has entries outside
/// [0, 1], std::invalid_argument on length mismatch.
double cross_entropy(std::span<const double> p, std::span<const double> y);

/// Loss and analytic gradients of cross entropy over the augmented softmax.
/// The gradient through the logits is the softmax kernel (p_i - y_i); the
/// distribution parameters pick up lambda times the CDF partials on top.
/// The loss itself is evaluated on a fused log-sum-exp path so it stays
/// finite even when some probability underflows.
BackwardResult gsoftmax_backward(std::span<const double> x,
                                 std::span<const double> y,
                                 const PredictorParams& params);

/// Gradient of the same loss with respect to lambda (used when lambda is
/// trained rather than fixed): sum_i (p_i - y_i) * Phi_i.
double gsoftmax_lambda_grad(std::span<const double> x,
                            std::span<const double> y,
                            const PredictorParams& params);

/// log(sum exp(x_i)) with max-shift.
double log_sum_exp(std::span<const double> x);

} // namespace gsoftmax

#endif
