#include <doctest.h>

#include <cmath>

#include "lvg/numerics.hpp"

using namespace lvg;
using namespace lvg::numerics;

TEST_CASE("bisect finds sinh root") {
    // sinh(y) = 1.5 -> y = asinh(1.5)
    MonotoneRootProblem p;
    p.evaluator = [](double y) { return std::sinh(y) - 1.5; };
    p.lo = 0.0;
    p.hi = 10.0;
    const double root = bisect(p);
    CHECK(root == doctest::Approx(std::asinh(1.5)).epsilon(1e-12));
    CHECK(root == doctest::Approx(1.1947632172871094).epsilon(1e-12));
}

TEST_CASE("bisect requires a sign change") {
    MonotoneRootProblem p;
    p.evaluator = [](double y) { return y * y + 1.0; };
    p.lo = 0.0;
    p.hi = 2.0;
    CHECK_THROWS_WITH_AS(bisect(p), doctest::Contains("NoSignChange"), ContractError);
}

TEST_CASE("expand_bracket walks out geometrically") {
    auto f = [](double y) { return std::log(y) - 8.0; };  // root at e^8 ~ 2981
    const auto [lo, hi] = expand_bracket(f, 1.0, Direction::Increasing);
    CHECK(f(lo) < 0.0);
    CHECK(f(hi) > 0.0);

    auto g = [](double y) { return std::log(y) + 8.0; };  // root at e^-8
    const auto [lo2, hi2] = expand_bracket(g, 1.0, Direction::Increasing);
    CHECK(g(lo2) < 0.0);
    CHECK(g(hi2) > 0.0);
}

TEST_CASE("solve_monotone with open bracket") {
    MonotoneRootProblem p;
    p.evaluator = [](double y) { return y * y * y - 7.0; };
    p.lo = 0.0;
    CHECK(solve_monotone(p) == doctest::Approx(std::cbrt(7.0)).epsilon(1e-12));
}

TEST_CASE("norm_cdf reference values") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
    CHECK(norm_cdf(-1.96) == doctest::Approx(0.024997895148220435).epsilon(1e-12));
}

TEST_CASE("implied vol round trip") {
    const double spot = 100.0;
    for (double tau : {0.05, 0.25, 1.0}) {
        for (double vol : {0.1, 0.2, 0.5}) {
            for (double strike : {80.0, 100.0, 120.0}) {
                const double price = black_scholes_call(spot, strike, tau, vol);
                if (price - std::max(spot - strike, 0.0) < 1e-10) continue;  // at intrinsic
                CHECK(implied_vol(price, strike, spot, tau) ==
                      doctest::Approx(vol).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("implied vol rejects prices outside the static band") {
    CHECK_THROWS_WITH_AS(implied_vol(101.0, 90.0, 100.0, 0.5), doctest::Contains("OutOfBand"),
                         DataError);
    CHECK_THROWS_WITH_AS(implied_vol(9.0, 90.0, 100.0, 0.5), doctest::Contains("OutOfBand"),
                         DataError);
}
