#ifndef GSOFTMAX_DIST_ANALYSIS_HPP
#define GSOFTMAX_DIST_ANALYSIS_HPP

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace gsoftmax {

/// Gaussian fitted to a sample: mean, standard deviation, sample count.
struct EmpiricalGaussian {
    double mu = 0.0;
    double sigma = 1.0;
    int n = 0;
};

/// Divisor used for the empirical standard deviation.
enum class StdDevMode {
    unbiased,  // n - 1 (default)
    population // n
};

/// Fit mean and standard deviation to at least two finite samples. The
/// standard deviation is floored at 1e-9 so downstream reciprocals and
/// divergences stay finite for degenerate single-valued samples.
EmpiricalGaussian fit_gaussian(std::span<const double> samples,
                               StdDevMode mode = StdDevMode::unbiased);

/// KL divergence D(a || b) between two univariate Gaussians:
/// log(sigma_b / sigma_a) + (sigma_a^2 + (mu_a - mu_b)^2) / (2 sigma_b^2) - 1/2.
/// Non-negative, and exactly 0 iff a and b coincide.
double kl_gaussian(const EmpiricalGaussian& a, const EmpiricalGaussian& b);

/// Mean symmetrized divergence between class i and all other classes:
/// 1 / (2(m-1)) * sum_{j != i} [D(i||j) + D(j||i)].
double mean_symmetric_kld(std::span<const EmpiricalGaussian> fits, std::size_t i);

struct ClassSeparability {
    int class_id = 0;
    double compactness = 0.0;  // 1 / sigma
    double separability = 0.0; // mean symmetric KLD against the other classes
    double ratio = 0.0;        // separability * compactness
};

struct SeparabilityReport {
    std::vector<ClassSeparability> per_class;
    std::vector<EmpiricalGaussian> fitted;

    double mean_compactness() const;
    double mean_separability() const;
    double mean_ratio() const;
};

/// Fit one Gaussian per class and score every class against all the others.
/// Keys of the map become class_ids (iteration order is the sorted key order).
SeparabilityReport separability_report(
    const std::map<int, std::vector<double>>& features_by_class,
    StdDevMode mode = StdDevMode::unbiased);

/// Variant where each class is scored against a single pooled impostor
/// sample instead of the other classes' own distributions. Both maps must
/// have identical keys; `fitted` holds the own-class fits.
SeparabilityReport separability_report_pooled(
    const std::map<int, std::vector<double>>& own_by_class,
    const std::map<int, std::vector<double>>& impostor_by_class,
    StdDevMode mode = StdDevMode::unbiased);

struct TTestResult {
    double t_stat = 0.0;
    double p_val = 1.0;
};

/// Two-sided paired t-test on equal-length samples. Throws
/// DegenerateDataError when every difference is identical (zero variance),
/// where the statistic is undefined.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

struct PearsonResult {
    double rho = 0.0;
    double p_val = 1.0;
};

/// Pearson correlation with a two-sided p-value from the t transform
/// t = rho * sqrt((n - 2) / (1 - rho^2)). Requires n >= 3 and both inputs
/// non-constant.
PearsonResult pearson_correlation(std::span<const double> a,
                                  std::span<const double> b);

/// Two-sided tail probability P(|T| >= |t|) for Student's t with df degrees
/// of freedom, via the regularized incomplete beta function.
double students_t_two_sided_p(double t, double df);

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation accurate to ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

} // namespace gsoftmax

#endif
