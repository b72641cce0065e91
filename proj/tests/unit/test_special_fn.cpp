#include <doctest.h>

#include <cmath>
#include <random>

#include "gsoftmax/special_fn.hpp"
#include "support/oracles.hpp"

using namespace gsoftmax;

TEST_CASE("erf at the origin and frozen reference points") {
    CHECK(erf(0.0) == 0.0);
    CHECK(erf(1.0) == doctest::Approx(0.8427007929497149).epsilon(1e-12));
    CHECK(erf(2.0) == doctest::Approx(0.9953222650189527).epsilon(1e-12));
    CHECK(erf(0.5) == doctest::Approx(0.5204998778130465).epsilon(1e-12));
    CHECK(erf(-1.0) == doctest::Approx(-0.8427007929497149).epsilon(1e-12));
}

TEST_CASE("erf is exactly odd") {
    for (int i = 0; i <= 400; ++i) {
        const double z = -6.5 + i * (13.0 / 400.0);
        CHECK(erf(-z) == -erf(z));
    }
}

TEST_CASE("erf agrees with the series/continued-fraction oracle on [-6, 6]") {
    double max_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double z = -6.0 + i * (12.0 / 999.0);
        max_err = std::max(max_err, std::fabs(erf(z) - oracles::erf_series(z)));
    }
    CHECK(max_err <= 1e-9);
    CHECK(max_err <= 1e-13); // actual agreement is much tighter
}

TEST_CASE("erf saturates to +/-1 beyond |z| = 6") {
    CHECK(erf(6.0) == 1.0);
    CHECK(erf(17.3) == 1.0);
    CHECK(erf(-6.0) == -1.0);
    CHECK(erf(-100.0) == -1.0);
    CHECK(std::fabs(erf(5.999) - 1.0) <= 1e-15);
}

TEST_CASE("erf rejects non-finite input") {
    CHECK_THROWS_AS(erf(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    CHECK_THROWS_AS(erf(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("erfc complements erf") {
    for (double z : {-4.0, -1.3, -0.2, 0.0, 0.4, 1.7, 3.9}) {
        CHECK(erfc(z) == doctest::Approx(1.0 - oracles::erf_series(z)).epsilon(1e-12));
    }
    CHECK(erfc(10.0) > 0.0); // no premature underflow in the tail
    CHECK(erfc(10.0) < 1e-40);
}

TEST_CASE("gaussian_cdf basics") {
    CHECK(gaussian_cdf(0.0, {0.0, 1.0}) == 0.5);
    CHECK(gaussian_cdf(3.7, {3.7, 0.25}) == 0.5);
    CHECK(gaussian_cdf(1.0, {0.0, 1.0}) ==
          doctest::Approx(0.8413447460685429).epsilon(1e-12));
    // Saturation: exactly 0 / 1 beyond eight standard deviations.
    CHECK(gaussian_cdf(8.5, {0.0, 1.0}) == 1.0);
    CHECK(gaussian_cdf(-8.5, {0.0, 1.0}) == 0.0);
    CHECK(gaussian_cdf(1000.0, {2.0, 3.0}) == 1.0);
}

TEST_CASE("gaussian_cdf bounds and monotonicity") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> xs(-20.0, 20.0);
    std::uniform_real_distribution<double> mus(-3.0, 3.0);
    std::uniform_real_distribution<double> sigmas(0.1, 10.0);
    for (int t = 0; t < 2000; ++t) {
        const GaussianParams g{mus(rng), sigmas(rng)};
        double x1 = xs(rng), x2 = xs(rng);
        if (x1 > x2) std::swap(x1, x2);
        const double c1 = gaussian_cdf(x1, g);
        const double c2 = gaussian_cdf(x2, g);
        CHECK(c1 >= 0.0);
        CHECK(c2 <= 1.0);
        CHECK(c1 <= c2);
    }
}

TEST_CASE("gaussian_cdf rejects bad sigma") {
    CHECK_THROWS_AS(gaussian_cdf(0.0, {0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(gaussian_cdf(0.0, {0.0, -1.0}), std::domain_error);
}

TEST_CASE("gaussian_cdf_grads closed forms") {
    const CdfGrads at_mean = gaussian_cdf_grads(0.0, {0.0, 1.0});
    CHECK(at_mean.d_sigma == 0.0);
    CHECK(at_mean.d_x == doctest::Approx(0.3989422804014327).epsilon(1e-12));

    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> xs(-3.0, 3.0);
    std::uniform_real_distribution<double> sigmas(0.1, 10.0);
    for (int t = 0; t < 500; ++t) {
        const GaussianParams g{xs(rng), sigmas(rng)};
        const double x = xs(rng);
        const CdfGrads cg = gaussian_cdf_grads(x, g);
        CHECK(cg.d_mu == -cg.d_x);
        CHECK(cg.d_x > 0.0);
        CHECK(cg.d_x == doctest::Approx(gaussian_pdf(x, g)).epsilon(1e-15));
    }
}

TEST_CASE("gaussian_cdf_grads match central finite differences") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> xs(-3.0, 3.0);
    std::uniform_real_distribution<double> sigmas(0.1, 10.0);
    const double h = 1e-5;
    auto rel = [](double a, double f) {
        return std::fabs(a - f) / std::max({1.0, std::fabs(a), std::fabs(f)});
    };
    for (int t = 0; t < 500; ++t) {
        const double mu = xs(rng);
        const double sigma = sigmas(rng);
        const double x = xs(rng);
        const CdfGrads cg = gaussian_cdf_grads(x, {mu, sigma});
        const double fd_x =
            (gaussian_cdf(x + h, {mu, sigma}) - gaussian_cdf(x - h, {mu, sigma})) /
            (2 * h);
        const double fd_mu =
            (gaussian_cdf(x, {mu + h, sigma}) - gaussian_cdf(x, {mu - h, sigma})) /
            (2 * h);
        const double fd_sigma =
            (gaussian_cdf(x, {mu, sigma + h}) - gaussian_cdf(x, {mu, sigma - h})) /
            (2 * h);
        CHECK(rel(cg.d_x, fd_x) <= 1e-6);
        CHECK(rel(cg.d_mu, fd_mu) <= 1e-6);
        CHECK(rel(cg.d_sigma, fd_sigma) <= 1e-6);
    }
}
