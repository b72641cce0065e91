#include <doctest.h>

#include <cmath>

#include "gsoftmax/lr_schedule.hpp"

using namespace gsoftmax;

namespace {

ScheduleSpec paper_style_spec() {
    // Two phases: a fast anneal to epoch 1000 and a gentle tail to 1100.
    ScheduleSpec spec;
    spec.base_rate = 0.1;
    spec.max_epoch = 1100;
    spec.pieces = {{1000, 0.0, -8.0}, {1100, -8.0, -9.0}};
    return spec;
}

} // namespace

TEST_CASE("constant-exponent schedule returns the base rate everywhere") {
    ScheduleSpec spec;
    spec.base_rate = 0.05;
    spec.max_epoch = 40;
    spec.pieces = {{40, 0.0, 0.0}};
    for (int e = 1; e <= 40; ++e) {
        CHECK(rate_at(spec, e) == 0.05);
    }
}

TEST_CASE("ramp starts at the base rate when the first exponent is 0") {
    ScheduleSpec spec;
    spec.base_rate = 0.3;
    spec.max_epoch = 25;
    spec.pieces = {{25, 0.0, -4.0}};
    CHECK(rate_at(spec, 1) == 0.3);
}

TEST_CASE("two-phase schedule frozen value at the boundary epoch") {
    const ScheduleSpec spec = paper_style_spec();
    // exp(-8/1099 * 999) * 0.1
    CHECK(rate_at(spec, 1000) ==
          doctest::Approx(6.9467564852534752e-05).epsilon(1e-12));
}

TEST_CASE("piece formulas agree at the shared boundary") {
    const ScheduleSpec spec = paper_style_spec();
    const double from_first = piece_rate(spec, 0, 1000);
    const double from_second = piece_rate(spec, 1, 1000);
    CHECK(std::fabs(from_first - from_second) <= 1e-12 * from_first);
    CHECK(rate_at(spec, 1000) == from_first);
}

TEST_CASE("two-phase schedule is strictly decreasing and positive") {
    const ScheduleSpec spec = paper_style_spec();
    double prev = rate_at(spec, 1);
    CHECK(prev > 0.0);
    for (int e = 2; e <= spec.max_epoch; ++e) {
        const double r = rate_at(spec, e);
        CHECK(r > 0.0);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("non-increasing whenever every piece anneals downward") {
    ScheduleSpec spec;
    spec.base_rate = 1.0;
    spec.max_epoch = 60;
    spec.pieces = {{20, 1.0, 0.0}, {45, 0.0, -2.0}, {60, -2.0, -2.0}};
    double prev = rate_at(spec, 1);
    for (int e = 2; e <= 60; ++e) {
        const double r = rate_at(spec, e);
        CHECK(r <= prev);
        prev = r;
    }
}

TEST_CASE("single piece equals the logspace schedule") {
    ScheduleSpec spec;
    spec.base_rate = 0.2;
    spec.max_epoch = 37;
    spec.pieces = {{37, 0.7, -3.1}};
    for (int e = 1; e <= 37; ++e) {
        const double expected =
            std::exp(0.7 + (-3.1 - 0.7) / (37.0 - 1.0) * (e - 1)) * 0.2;
        CHECK(rate_at(spec, e) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("schedule validation") {
    ScheduleSpec spec;
    spec.base_rate = 0.1;
    spec.max_epoch = 10;
    spec.pieces = {{5, 0.0, -1.0}, {10, -1.0, -2.0}};
    CHECK_NOTHROW(spec.validate());

    SUBCASE("epoch out of range") {
        CHECK_THROWS_AS(rate_at(spec, 0), std::domain_error);
        CHECK_THROWS_AS(rate_at(spec, 11), std::domain_error);
    }
    SUBCASE("pieces must hand off exponents") {
        spec.pieces[1].exp_start = -0.5;
        CHECK_THROWS_AS(spec.validate(), std::domain_error);
    }
    SUBCASE("end epochs strictly increasing") {
        spec.pieces[1].end_epoch = 5;
        CHECK_THROWS_AS(spec.validate(), std::domain_error);
    }
    SUBCASE("last piece must end at max_epoch") {
        spec.pieces[1].end_epoch = 9;
        CHECK_THROWS_AS(spec.validate(), std::domain_error);
    }
    SUBCASE("base rate positive") {
        spec.base_rate = 0.0;
        CHECK_THROWS_AS(spec.validate(), std::domain_error);
    }
}

TEST_CASE("linspace endpoints and midpoint") {
    CHECK(linspace_rate(1.0, 0.0, 0.1, 3, 1) == 0.1);
    CHECK(linspace_rate(1.0, 0.0, 0.1, 3, 3) == 0.0);
    CHECK(linspace_rate(1.0, 0.0, 0.1, 3, 2) == 0.05);
    CHECK(linspace_rate(2.0, 0.5, 0.2, 11, 11) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK_THROWS_AS(linspace_rate(1.0, 0.0, 0.1, 3, 4), std::domain_error);
    CHECK_THROWS_AS(linspace_rate(1.0, 0.0, 0.1, 1, 1), std::domain_error);
}

TEST_CASE("staircase follows the step table") {
    const std::vector<StairStep> steps{{149, 0.1}, {224, 0.01}, {300, 0.001}};
    CHECK(staircase_rate(steps, 1) == 0.1);
    CHECK(staircase_rate(steps, 149) == 0.1);
    CHECK(staircase_rate(steps, 150) == 0.01);
    CHECK(staircase_rate(steps, 224) == 0.01);
    CHECK(staircase_rate(steps, 225) == 0.001);
    CHECK(staircase_rate(steps, 300) == 0.001);
    CHECK_THROWS_AS(staircase_rate(steps, 301), std::domain_error);
    CHECK_THROWS_AS(staircase_rate(steps, 0), std::domain_error);
    CHECK_THROWS_AS(staircase_rate({}, 1), std::domain_error);
}
