#include "gsoftmax/special_fn.hpp"

#include <cmath>
#include <stdexcept>

namespace gsoftmax {
namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kSqrt2 = 1.41421356237309504880;

// W. J. Cody's rational approximations for erf/erfc (SPECFUN "calerf").
// Three regions: |z| <= 0.46875 (erf directly), 0.46875 < |z| <= 4 and
// |z| > 4 (erfc, rescaled by exp(-z^2) split into an exactly representable
// square plus a correction term).
constexpr double kErfA[5] = {3.16112374387056560e0, 1.13864154151050156e2,
                             3.77485237685302021e2, 3.20937758913846947e3,
                             1.85777706184603153e-1};
constexpr double kErfB[4] = {2.36012909523441209e1, 2.44024637934444173e2,
                             1.28261652607737228e3, 2.84423683343917062e3};
constexpr double kErfC[9] = {5.64188496988670089e-1, 8.88314979438837594e0,
                             6.61191906371416295e1,  2.98635138197400131e2,
                             8.81952221241769090e2,  1.71204761263407058e3,
                             2.05107837782607147e3,  1.23033935479799725e3,
                             2.15311535474403846e-8};
constexpr double kErfD[8] = {1.57449261107098347e1, 1.17693950891312499e2,
                             5.37181101862009858e2, 1.62138957456669019e3,
                             3.29079923573345963e3, 4.36261909014324716e3,
                             3.43936767414372164e3, 1.23033935480374942e3};
constexpr double kErfP[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                             1.25781726111229246e-1, 1.60837851487422766e-2,
                             6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr double kErfQ[5] = {2.56852019228982242e0, 1.87295284992346047e0,
                             5.27905102951428412e-1, 6.05183413124413191e-2,
                             2.33520497626869185e-3};

// erf(y) for 0 <= y <= 0.46875.
double erf_small(double y) {
    const double ysq = y * y;
    double num = kErfA[4] * ysq;
    double den = ysq;
    for (int i = 0; i < 3; ++i) {
        num = (num + kErfA[i]) * ysq;
        den = (den + kErfB[i]) * ysq;
    }
    return y * (num + kErfA[3]) / (den + kErfB[3]);
}

// erfc(y) for y > 0.46875.
double erfc_large(double y) {
    double result;
    if (y <= 4.0) {
        double num = kErfC[8] * y;
        double den = y;
        for (int i = 0; i < 7; ++i) {
            num = (num + kErfC[i]) * y;
            den = (den + kErfD[i]) * y;
        }
        result = (num + kErfC[7]) / (den + kErfD[7]);
    } else {
        const double ysq = 1.0 / (y * y);
        double num = kErfP[5] * ysq;
        double den = ysq;
        for (int i = 0; i < 4; ++i) {
            num = (num + kErfP[i]) * ysq;
            den = (den + kErfQ[i]) * ysq;
        }
        result = ysq * (num + kErfP[4]) / (den + kErfQ[4]);
        result = (kInvSqrtPi - result) / y;
    }
    // exp(-y^2) evaluated as exp(-hi^2) * exp(-(y-hi)(y+hi)) with hi a
    // 1/16-grid truncation of y, which keeps the argument of the first exp
    // exactly representable.
    const double hi = std::trunc(y * 16.0) / 16.0;
    const double del = (y - hi) * (y + hi);
    return std::exp(-hi * hi) * std::exp(-del) * result;
}

void check_finite(double z) {
    if (!std::isfinite(z)) {
        throw std::domain_error("special_fn: non-finite argument");
    }
}

void check_params(const GaussianParams& g) {
    if (!std::isfinite(g.mu) || !std::isfinite(g.sigma)) {
        throw std::domain_error("special_fn: non-finite Gaussian parameters");
    }
    if (g.sigma <= 0.0) {
        throw std::domain_error("special_fn: sigma must be > 0");
    }
}

} // namespace

double erf(double z) {
    check_finite(z);
    const double y = std::fabs(z);
    double r;
    if (y <= 0.46875) {
        return erf_small(z); // odd through the leading factor of z
    } else if (y < 6.0) {
        r = 1.0 - erfc_large(y);
    } else {
        r = 1.0;
    }
    return z < 0.0 ? -r : r;
}

double erfc(double z) {
    check_finite(z);
    const double y = std::fabs(z);
    double r;
    if (y <= 0.46875) {
        return 1.0 - erf_small(z);
    }
    r = y >= 27.0 ? 0.0 : erfc_large(y); // exp(-27^2) underflows
    return z < 0.0 ? 2.0 - r : r;
}

double gaussian_pdf(double x, const GaussianParams& g) {
    check_finite(x);
    check_params(g);
    const double t = (x - g.mu) / g.sigma;
    return std::exp(-0.5 * t * t) / (g.sigma * std::sqrt(2.0 * M_PI));
}

double gaussian_cdf(double x, const GaussianParams& g) {
    check_finite(x);
    check_params(g);
    const double t = (x - g.mu) / g.sigma;
    if (t > 8.0) return 1.0;
    if (t < -8.0) return 0.0;
    // 0.5 * erfc(-t/sqrt(2)) avoids the 1 + erf cancellation in the left tail.
    return 0.5 * erfc(-t / kSqrt2);
}

CdfGrads gaussian_cdf_grads(double x, const GaussianParams& g) {
    CdfGrads out;
    out.d_x = gaussian_pdf(x, g);
    out.d_mu = -out.d_x;
    out.d_sigma = (g.mu - x) / g.sigma * out.d_x;
    return out;
}

} // namespace gsoftmax
