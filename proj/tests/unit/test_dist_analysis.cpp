#include <doctest.h>

#include <cmath>
#include <random>

#include "gsoftmax/dist_analysis.hpp"
#include "gsoftmax/errors.hpp"
#include "support/oracles.hpp"

using namespace gsoftmax;

TEST_CASE("fit_gaussian moments") {
    const EmpiricalGaussian g = fit_gaussian(std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(g.mu == 2.5);
    CHECK(g.sigma == doctest::Approx(1.2909944487358056).epsilon(1e-14));
    CHECK(g.n == 4);

    const EmpiricalGaussian pop = fit_gaussian(std::vector<double>{1.0, 2.0, 3.0, 4.0},
                                               StdDevMode::population);
    CHECK(pop.sigma == doctest::Approx(std::sqrt(1.25)).epsilon(1e-14));

    const EmpiricalGaussian sym = fit_gaussian(std::vector<double>{-1.0, 1.0});
    CHECK(sym.mu == 0.0);

    const EmpiricalGaussian flat =
        fit_gaussian(std::vector<double>{3.25, 3.25, 3.25, 3.25});
    CHECK(flat.mu == 3.25);
    CHECK(flat.sigma == 1e-9); // degenerate sample hits the floor

    CHECK_THROWS_AS(fit_gaussian(std::vector<double>{1.0}), std::domain_error);
    CHECK_THROWS_AS(fit_gaussian(std::vector<double>{1.0, std::nan("")}),
                    std::domain_error);
}

TEST_CASE("kl_gaussian closed-form values") {
    const EmpiricalGaussian std_normal{0.0, 1.0, 10};
    CHECK(kl_gaussian(std_normal, std_normal) == 0.0);
    CHECK(kl_gaussian({0.0, 1.0, 10}, {1.0, 1.0, 10}) == 0.5);
    CHECK(kl_gaussian({0.0, 2.0, 10}, {0.0, 1.0, 10}) ==
          doctest::Approx(0.8068528194400547).epsilon(1e-14));
}

TEST_CASE("kl_gaussian matches quadrature and is non-negative") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> mus(-5.0, 5.0);
    std::uniform_real_distribution<double> sigmas(0.2, 5.0);
    for (int t = 0; t < 1000; ++t) {
        const EmpiricalGaussian a{mus(rng), sigmas(rng), 2};
        const EmpiricalGaussian b{mus(rng), sigmas(rng), 2};
        const double closed = kl_gaussian(a, b);
        CHECK(closed >= 0.0);
        CHECK(std::fabs(closed - oracles::kl_quadrature(a, b)) <= 1e-6);
    }
}

TEST_CASE("mean_symmetric_kld") {
    const std::vector<EmpiricalGaussian> same{{0.0, 1.0, 5}, {0.0, 1.0, 5}, {0.0, 1.0, 5}};
    CHECK(mean_symmetric_kld(same, 0) == 0.0);
    CHECK(mean_symmetric_kld(same, 2) == 0.0);

    const std::vector<EmpiricalGaussian> pair{{0.0, 1.0, 5}, {1.0, 1.0, 5}};
    CHECK(mean_symmetric_kld(pair, 0) == 0.5);
    CHECK(mean_symmetric_kld(pair, 1) == 0.5);

    // Brute-force pairwise sum on a three-class fixture with one distant class.
    const std::vector<EmpiricalGaussian> fits{{0.0, 1.0, 5}, {0.5, 2.0, 5}, {40.0, 0.5, 5}};
    for (std::size_t i = 0; i < fits.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < fits.size(); ++j) {
            if (j == i) continue;
            sum += kl_gaussian(fits[i], fits[j]) + kl_gaussian(fits[j], fits[i]);
        }
        const double expected = sum / (2.0 * (fits.size() - 1));
        CHECK(mean_symmetric_kld(fits, i) == doctest::Approx(expected).epsilon(1e-15));
    }
    CHECK(mean_symmetric_kld(fits, 2) > mean_symmetric_kld(std::vector<EmpiricalGaussian>{
                                            fits[0], fits[1]}, 0));

    CHECK_THROWS_AS(mean_symmetric_kld(std::vector<EmpiricalGaussian>{{0.0, 1.0, 5}}, 0),
                    std::domain_error);
}

TEST_CASE("separability_report") {
    std::map<int, std::vector<double>> identical{
        {0, {0.1, 0.2, 0.3, 0.4}},
        {1, {0.1, 0.2, 0.3, 0.4}},
    };
    const SeparabilityReport same = separability_report(identical);
    for (const ClassSeparability& c : same.per_class) {
        CHECK(c.separability == 0.0);
        CHECK(c.ratio == 0.0);
    }

    SUBCASE("scaling a class divides its compactness") {
        std::map<int, std::vector<double>> base{
            {0, {0.0, 1.0, 2.0, 3.0}},
            {1, {5.0, 6.0, 7.0, 8.0}},
        };
        const double k = 4.0;
        std::map<int, std::vector<double>> scaled = base;
        for (double& v : scaled[0]) v *= k;
        const SeparabilityReport r0 = separability_report(base);
        const SeparabilityReport r1 = separability_report(scaled);
        CHECK(r1.per_class[0].compactness ==
              doctest::Approx(r0.per_class[0].compactness / k).epsilon(1e-12));
    }

    SUBCASE("matches a direct recomputation on a three-class fixture") {
        std::map<int, std::vector<double>> features{
            {0, {0.0, 0.4, -0.3, 0.2, 0.1}},
            {1, {2.0, 2.5, 1.8, 2.2, 2.1}},
            {2, {-3.0, -3.5, -2.8, -3.1, -3.3}},
        };
        const SeparabilityReport rep = separability_report(features);
        std::vector<EmpiricalGaussian> fits;
        for (const auto& [id, samples] : features) {
            (void)id;
            fits.push_back(fit_gaussian(samples));
        }
        for (std::size_t i = 0; i < fits.size(); ++i) {
            const double d = mean_symmetric_kld(fits, i);
            CHECK(rep.per_class[i].separability == doctest::Approx(d).epsilon(1e-15));
            CHECK(rep.per_class[i].compactness ==
                  doctest::Approx(1.0 / fits[i].sigma).epsilon(1e-15));
            // ratio is exactly separability * compactness, no re-derivation
            CHECK(rep.per_class[i].ratio ==
                  rep.per_class[i].separability * rep.per_class[i].compactness);
            CHECK(rep.per_class[i].ratio ==
                  doctest::Approx(d / fits[i].sigma).epsilon(1e-14));
        }
    }

    SUBCASE("class errors carry the class id") {
        std::map<int, std::vector<double>> bad{{0, {1.0, 2.0}}, {7, {1.0}}};
        CHECK_THROWS_WITH_AS(separability_report(bad),
                             doctest::Contains("class 7"), std::domain_error);
    }
}

TEST_CASE("separability_report_pooled") {
    std::map<int, std::vector<double>> own{
        {0, {1.0, 1.2, 0.8, 1.1}},
        {1, {-1.0, -1.1, -0.9, -1.2}},
    };
    std::map<int, std::vector<double>> impostor{
        {0, {-0.9, -1.3, -1.0, -0.8}},
        {1, {0.9, 1.3, 1.0, 1.2}},
    };
    const SeparabilityReport rep = separability_report_pooled(own, impostor);
    REQUIRE(rep.per_class.size() == 2);
    const EmpiricalGaussian own0 = fit_gaussian(own[0]);
    const EmpiricalGaussian imp0 = fit_gaussian(impostor[0]);
    const double expected =
        0.5 * (kl_gaussian(own0, imp0) + kl_gaussian(imp0, own0));
    CHECK(rep.per_class[0].separability == doctest::Approx(expected).epsilon(1e-15));
    CHECK(rep.per_class[0].compactness == doctest::Approx(1.0 / own0.sigma).epsilon(1e-15));

    std::map<int, std::vector<double>> missing{{0, {1.0, 2.0}}};
    CHECK_THROWS_AS(separability_report_pooled(own, missing), std::domain_error);
}

TEST_CASE("paired_t_test") {
    SUBCASE("frozen fixture of length 10") {
        const std::vector<double> a{0.62, 0.71, 0.55, 0.80, 0.66,
                                    0.91, 0.47, 0.73, 0.59, 0.68};
        const std::vector<double> b{0.60, 0.74, 0.51, 0.78, 0.70,
                                    0.88, 0.45, 0.70, 0.62, 0.65};
        const TTestResult r = paired_t_test(a, b);
        CHECK(r.t_stat == doctest::Approx(0.9492694478117518).epsilon(1e-12));
        CHECK(r.p_val == doctest::Approx(0.36727568840720715).epsilon(1e-9));
        CHECK(r.p_val == doctest::Approx(oracles::t_two_sided_p(r.t_stat, 9.0))
                             .epsilon(1e-8));
        CHECK(r.p_val >= 0.0);
        CHECK(r.p_val <= 1.0);
    }
    SUBCASE("identical samples are degenerate") {
        const std::vector<double> a{0.1, 0.2, 0.3};
        CHECK_THROWS_AS(paired_t_test(a, a), DegenerateDataError);
    }
    SUBCASE("constant shift has zero variance and is degenerate") {
        const std::vector<double> a{0.1, 0.2, 0.3};
        const std::vector<double> b{0.4, 0.5, 0.6};
        CHECK_THROWS_AS(paired_t_test(a, b), DegenerateDataError);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(paired_t_test(std::vector<double>{1.0},
                                      std::vector<double>{2.0}),
                        std::domain_error);
        CHECK_THROWS_AS(paired_t_test(std::vector<double>{1.0, 2.0},
                                      std::vector<double>{2.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("pearson_correlation") {
    SUBCASE("perfect linear relations") {
        const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
        std::vector<double> b(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) b[i] = 2.0 * a[i] + 3.0;
        const PearsonResult up = pearson_correlation(a, b);
        CHECK(up.rho == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(up.p_val <= 1e-12);
        for (std::size_t i = 0; i < a.size(); ++i) b[i] = -a[i];
        const PearsonResult down = pearson_correlation(a, b);
        CHECK(down.rho == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("frozen fixture of length 5 and direct-formula oracle") {
        const std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0};
        const std::vector<double> b{2.1, 3.9, 6.2, 8.1, 9.8};
        const PearsonResult r = pearson_correlation(a, b);
        CHECK(r.rho == doctest::Approx(0.9988047286880716).epsilon(1e-12));
        CHECK(std::fabs(r.rho - oracles::pearson_rho_direct(a, b)) <= 1e-12);
        CHECK(r.p_val == doctest::Approx(4.9597035775149295e-05).epsilon(1e-8));
    }
    SUBCASE("affine invariance") {
        std::mt19937_64 rng(62);
        std::uniform_real_distribution<double> uni(-2.0, 2.0);
        for (int t = 0; t < 100; ++t) {
            std::vector<double> a(8), b(8);
            for (auto& v : a) v = uni(rng);
            for (auto& v : b) v = uni(rng);
            const double alpha = 0.25 + std::fabs(uni(rng));
            const double beta = uni(rng);
            std::vector<double> a2(8);
            for (std::size_t i = 0; i < 8; ++i) a2[i] = alpha * a[i] + beta;
            CHECK(std::fabs(pearson_correlation(a, b).rho -
                            pearson_correlation(a2, b).rho) <= 1e-12);
        }
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(pearson_correlation(std::vector<double>{1.0, 2.0},
                                            std::vector<double>{1.0, 2.0}),
                        std::domain_error);
        CHECK_THROWS_AS(pearson_correlation(std::vector<double>{1.0, 1.0, 1.0},
                                            std::vector<double>{1.0, 2.0, 3.0}),
                        std::domain_error);
    }
}

TEST_CASE("students_t_two_sided_p against frozen values and quadrature") {
    CHECK(students_t_two_sided_p(2.1, 9.0) ==
          doctest::Approx(0.06511828241215198).epsilon(1e-10));
    CHECK(students_t_two_sided_p(-0.77, 4.0) ==
          doctest::Approx(0.4842529779093382).epsilon(1e-10));
    CHECK(students_t_two_sided_p(0.0, 5.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (double df : {1.0, 2.0, 5.0, 9.0, 30.0}) {
        for (double t : {0.1, 0.5, 1.0, 2.5, 5.0}) {
            CHECK(std::fabs(students_t_two_sided_p(t, df) -
                            oracles::t_two_sided_p(t, df)) <= 1e-8);
        }
    }
}

TEST_CASE("regularized incomplete beta") {
    CHECK(regularized_incomplete_beta(2.5, 0.5, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.5, 0.5, 1.0) == 1.0);
    CHECK(regularized_incomplete_beta(2.5, 0.5, 0.3) ==
          doctest::Approx(0.018927124071945658).epsilon(1e-10));
    CHECK(regularized_incomplete_beta(0.5, 3.5, 0.7) ==
          doctest::Approx(0.9950761957477983).epsilon(1e-10));
    CHECK_THROWS_AS(regularized_incomplete_beta(-1.0, 0.5, 0.3), std::domain_error);
    CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 0.5, 1.5), std::domain_error);
}
