#include <doctest.h>

#include <cmath>
#include <numbers>

#include "potentia/kernels.hpp"

using namespace potentia;

TEST_CASE("kernel values by dimension") {
    CHECK(kernel_h(2, Point{1, 0}) == doctest::Approx(0.0));  // log 1
    CHECK(kernel_h(1, Point{-3, 0}) == doctest::Approx(3.0));
    CHECK(kernel_h(3, Point{2, 0}) == doctest::Approx(-0.5));
    CHECK(kernel_h_radial(5, 2.0) == doctest::Approx(-1.0 / 8.0));
    CHECK(is_neg_inf(kernel_h(2, Point{0, 0})));
    CHECK(is_neg_inf(kernel_h_radial(3, 0.0)));
    CHECK(kernel_h(1, Point{0, 0}) == 0.0);
}

TEST_CASE("kernel rejects invalid dimensions") {
    CHECK_THROWS_AS(kernel_h_radial(0, 1.0), InvalidDimensionError);
    CHECK_THROWS_AS(kernel_h_radial(-2, 1.0), InvalidDimensionError);
    CHECK_THROWS_AS(riesz_constant(0), InvalidDimensionError);
    CHECK_THROWS_AS(make_kernel(-1), InvalidDimensionError);
}

TEST_CASE("riesz constants match the gamma formula") {
    // Independent oracle: evaluate the formula with std::tgamma.
    auto oracle = [](int m) {
        return std::tgamma(0.5 * m) /
               (2.0 * std::pow(std::numbers::pi, 0.5 * m) * std::max(1, m - 2));
    };
    for (int m = 1; m <= 6; ++m) {
        CAPTURE(m);
        CHECK(riesz_constant(m) == doctest::Approx(oracle(m)).epsilon(1e-14));
    }
    CHECK(riesz_constant(1) == doctest::Approx(0.5));
    CHECK(riesz_constant(2) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
    CHECK(riesz_constant(3) == doctest::Approx(1.0 / (4.0 * std::numbers::pi)));
}

TEST_CASE("half-integer gamma recurrence") {
    for (int k = 1; k <= 9; ++k) {
        CAPTURE(k);
        CHECK(half_integer_gamma(k) == doctest::Approx(std::tgamma(0.5 * k)).epsilon(1e-13));
    }
}

TEST_CASE("kernels are radial and nondecreasing in |t|") {
    for (int m : {1, 2, 3, 4}) {
        double prev = kernel_h_radial(m, 1e-6);
        for (double r = 0.1; r < 50.0; r *= 1.7) {
            const double v = kernel_h_radial(m, r);
            CHECK(v >= prev);
            prev = v;
            CHECK(kernel_h(m, Point{r, 0}) ==
                  doctest::Approx(kernel_h(m, Point{0, -r})).epsilon(1e-13));
        }
    }
}

TEST_CASE("kernel limits at infinity") {
    CHECK(kernel_h_radial(3, 1e8) < 0.0);
    CHECK(kernel_h_radial(3, 1e8) == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(kernel_h_radial(1, 1e8) > 1e7);
    CHECK(kernel_h_radial(2, 1e8) > 10.0);
}
