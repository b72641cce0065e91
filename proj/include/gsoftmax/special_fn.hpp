#ifndef GSOFTMAX_SPECIAL_FN_HPP
#define GSOFTMAX_SPECIAL_FN_HPP

namespace gsoftmax {

/// Mean / standard deviation pair of a univariate Gaussian. sigma must be
/// strictly positive; operations taking GaussianParams throw std::domain_error
/// otherwise.
struct GaussianParams {
    double mu = 0.0;
    double sigma = 1.0;
};

/// Error function, evaluated with rational approximations accurate to a few
/// ulp (absolute error well below 1e-9 everywhere). Exactly odd: the sign is
/// applied after evaluating on |z|. Saturates to +/-1 for |z| >= 6, where
/// 1 - erf(|z|) < 3e-17 is not representable next to 1.0 anyway.
/// Throws std::domain_error on non-finite input.
double erf(double z);

/// Complementary error function 1 - erf(z), computed without cancellation for
/// large positive z. Same domain checks as erf.
double erfc(double z);

/// Gaussian density at x.
double gaussian_pdf(double x, const GaussianParams& g);

/// Gaussian cumulative distribution at x. Result is in [0, 1], monotone
/// non-decreasing in x, and exactly 0.5 at x == mu. For |x - mu| > 8 * sigma
/// the result saturates to exactly 0 or 1 (the true tail mass there is below
/// 7e-16, under one ulp of 1.0).
double gaussian_cdf(double x, const GaussianParams& g);

/// Partial derivatives of gaussian_cdf with respect to its three arguments.
/// d_x is the Gaussian density (always > 0), d_mu == -d_x, and
/// d_sigma == (mu - x) / sigma * d_x.
struct CdfGrads {
    double d_x = 0.0;
    double d_mu = 0.0;
    double d_sigma = 0.0;
};

CdfGrads gaussian_cdf_grads(double x, const GaussianParams& g);

} // namespace gsoftmax

#endif
