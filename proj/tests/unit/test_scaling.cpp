#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wasep/scaling.hpp"

using namespace wasep;
using doctest::Approx;

TEST_CASE("closed forms at eps = 0.04") {
    const auto s = scaling_constants(0.04);
    CHECK(s.p == Approx(0.4).epsilon(1e-15));
    CHECK(s.q == Approx(0.6).epsilon(1e-15));
    CHECK(s.p + s.q == 1.0);
    CHECK(s.gamma == Approx(2.5).epsilon(1e-15));
    // lambda = log(1.5)/2 = artanh(0.2); v = 1 - sqrt(0.96).
    CHECK(s.lambda == Approx(0.2027325540540822).epsilon(1e-15));
    CHECK(s.v == Approx(0.020204102886728761).epsilon(1e-15));
}

TEST_CASE("epsilon domain is enforced") {
    CHECK_THROWS_AS(scaling_constants(0.0), std::invalid_argument);
    CHECK_THROWS_AS(scaling_constants(1.0), std::invalid_argument);
    CHECK_THROWS_AS(scaling_constants(-0.3), std::invalid_argument);
    CHECK_THROWS_AS(scaling_constants(1.5), std::invalid_argument);
}

TEST_CASE("leading order of the exact forms as eps -> 0") {
    const auto s = scaling_constants(1e-8);
    CHECK(s.lambda / std::sqrt(1e-8) == Approx(1.0).epsilon(1e-6));
    CHECK(s.v / (0.5e-8) == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("series remainder order at eps = 0.04") {
    // artanh(0.2) - (0.2 + 0.2^3/3) = 6.5887387415524e-5, which is
    // eps^{5/2} * (1/5 + O(eps)): the printed remainder order.
    const auto s = scaling_constants(0.04);
    const double series = 0.2 + std::pow(0.2, 3) / 3.0;
    const double remainder = s.lambda - series;
    CHECK(remainder == Approx(6.5887387415524322e-5).epsilon(1e-9));
    const double ratio = remainder / std::pow(0.04, 2.5);
    CHECK(ratio == Approx(0.2059).epsilon(1e-3));
}

TEST_CASE("lambda and v match their alternative closed forms across scales") {
    // 10 logarithmically spaced eps in [1e-4, 0.25].
    for (int k = 0; k < 10; ++k) {
        const double eps =
            1e-4 * std::pow(0.25 / 1e-4, static_cast<double>(k) / 9.0);
        const auto s = scaling_constants(eps);
        const double lambda_log = 0.5 * std::log(s.q / s.p);
        CHECK(std::abs(s.lambda - lambda_log) <= 1e-14 * std::abs(s.lambda));
        // The direct form 1 - sqrt(1-eps) carries ~ulp(1) absolute error from
        // the subtraction near 1; compare at that precision.
        const double v_direct = 1.0 - std::sqrt(1.0 - eps);
        CHECK(std::abs(s.v - v_direct) <= 5e-16);
        const double v_identity = s.p + s.q - 2.0 * std::sqrt(s.p * s.q);
        CHECK(std::abs(s.v - v_identity) <= 1e-11 * std::abs(s.v));
        CHECK(s.q > s.p);
        CHECK(s.lambda > 0.0);
    }
}
