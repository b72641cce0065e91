#ifndef GSOFTMAX_TESTS_ORACLES_HPP
#define GSOFTMAX_TESTS_ORACLES_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "gsoftmax/dist_analysis.hpp"
#include "gsoftmax/ranking_metrics.hpp"

// Independent reference implementations used only by tests. Everything here
// deliberately avoids the code paths it is used to check.
namespace oracles {

/// erf by Maclaurin series (|z| < 2.5) or the Lentz-evaluated continued
/// fraction for erfc (|z| >= 2.5), summed/iterated to double-precision
/// convergence.
double erf_series(double z);

/// KL divergence between two Gaussians by composite 10-point Gauss-Legendre
/// quadrature of the defining integral over [mu_a - 12 sigma_a, mu_a + 12
/// sigma_a], using analytic log-densities.
double kl_quadrature(const gsoftmax::EmpiricalGaussian& a,
                     const gsoftmax::EmpiricalGaussian& b);

/// Two-sided Student-t tail probability by numerical integration of the
/// t density over [0, |t|].
double t_two_sided_p(double t, double df);

/// Average precision by a naive O(n^2) rank walk (selection-sorted copies).
double average_precision(std::span<const gsoftmax::ScoredItem> items);

/// The six precision/recall/F1 metrics recomputed from raw probabilities and
/// labels without going through ConfusionCounts.
struct PrfValues {
    double cp, cr, cf1, op, orr, of1;
};
PrfValues prf_brute_force(const std::vector<std::vector<double>>& probs,
                          const std::vector<std::vector<int>>& labels,
                          double threshold);

/// Pearson rho by the direct covariance formula
/// (sum ab - n*mean_a*mean_b) / sqrt((sum a^2 - n mean_a^2)(sum b^2 - n mean_b^2)).
double pearson_rho_direct(std::span<const double> a, std::span<const double> b);

} // namespace oracles

#endif
