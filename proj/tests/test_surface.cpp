#include <doctest.h>

#include <cmath>
#include <vector>

#include "lvg/surface.hpp"

using namespace lvg;

TEST_CASE("piecewise constant lookup") {
    const PiecewiseConstant f{{0.0, 1.0, 3.0}, {2.0, 5.0}};
    CHECK(f.at(0.5) == 2.0);
    CHECK(f.at(1.0) == 5.0);
    CHECK(f.at(2.9) == 5.0);
}

TEST_CASE("first interval local variance is sigma squared") {
    // With t* = 2/z^2 the calendar spread against zero collapses to
    // a^2 = 2 V / (t* V'') = sigma^2.
    const double z = std::sqrt(2.0 / 0.1);
    LVGSlice slice(z, 100.0, 60.0, 150.0, {90.0, 115.0}, {8.0, 11.0, 9.0});
    NonHomLVGModel model = assemble_model({slice}, {0.1}, 100.0);
    CHECK(model.tstar(0) == doctest::Approx(0.1).epsilon(1e-15));
    for (double k : {70.0, 95.0, 110.0, 140.0})
        CHECK(local_variance(model, 0, k) ==
              doctest::Approx(std::pow(slice.sigma_at(k), 2)).epsilon(1e-10));
}

TEST_CASE("local variance agrees with a finite-difference calendar spread") {
    const double z = std::sqrt(2.0 / 0.1);
    LVGSlice s1(z, 100.0, 60.0, 150.0, {90.0}, {8.0, 9.0});
    LVGSlice s2(z, 100.0, 55.0, 160.0, {90.0, 120.0}, {10.0, 12.0, 11.0});
    NonHomLVGModel model = assemble_model({s1, s2}, {0.1, 0.25}, 100.0);
    const double h = 1e-3 * 100.0;
    for (double k : {70.0, 95.0, 110.0, 140.0}) {
        const double density =
            (model.call_price(1, k - h) - 2.0 * model.call_price(1, k) +
             model.call_price(1, k + h)) / (h * h);
        const double spread = model.call_price(1, k) - model.call_price(0, k);
        const double oracle = (2.0 / model.tstar(1)) * spread / density;
        CHECK(local_variance(model, 1, k) == doctest::Approx(oracle).epsilon(2e-3));
    }
}

TEST_CASE("earlier curve is extended down to intrinsic outside its bounds") {
    const double z = std::sqrt(2.0 / 0.1);
    LVGSlice s1(z, 100.0, 80.0, 130.0, {}, {9.0});
    LVGSlice s2(z, 100.0, 60.0, 150.0, {}, {11.0});
    NonHomLVGModel model = assemble_model({s1, s2}, {0.1, 0.2}, 100.0);
    CHECK(model.call_price(0, 70.0) == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(model.call_price(0, 140.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(model.call_price(0, 100.0) ==
          doctest::Approx(s1.call_price(100.0)).epsilon(1e-12));
    // The spread stays positive, so the variance is defined near the old bounds.
    CHECK(local_variance(model, 1, 80.0) > 0.0);
}

TEST_CASE("single smile calibration inverts a known slice") {
    const double tau_star = 0.1;
    const double z = std::sqrt(2.0 / tau_star);
    LVGSlice slice(z, 100.0, 60.0, 150.0, {90.0, 115.0}, {8.0, 11.0, 9.0});
    auto price = [&](double k) { return slice.call_price(k); };
    auto second = [&](double k) { return slice.density(k); };
    const auto a2 = single_smile_calibration(price, second, 100.0, tau_star);
    for (double k : {70.0, 95.0, 110.0, 140.0})
        CHECK(a2(k) == doctest::Approx(std::pow(slice.sigma_at(k), 2)).epsilon(1e-8));
}

TEST_CASE("harmonic coarsening preserves the integral of 1/a^2") {
    const PiecewiseConstant a2{{0.0, 1.0, 2.0, 4.0}, {1.0, 4.0, 2.0}};
    const PiecewiseConstant out = coarsen_coefficient(a2, {0.0, 2.0, 4.0});
    // Two equal segments: the harmonic mean 2/(1/1 + 1/4) = 8/5.
    CHECK(out.values[0] == doctest::Approx(1.6).epsilon(1e-15));
    CHECK(out.values[1] == doctest::Approx(2.0).epsilon(1e-15));
    // Per-bin integral of 1/a^2 is preserved.
    CHECK(2.0 / out.values[0] == doctest::Approx(1.0 / 1.0 + 1.0 / 4.0).epsilon(1e-12));
    CHECK(2.0 / out.values[1] == doctest::Approx(2.0 / 2.0).epsilon(1e-12));

    // Identity when the bins are the original knots.
    const PiecewiseConstant same = coarsen_coefficient(a2, a2.knots);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(same.values[j] == doctest::Approx(a2.values[j]).epsilon(1e-15));
}

TEST_CASE("coarsen_slice keeps ATM behaviour reasonable") {
    const double z = std::sqrt(2.0 / 0.1);
    LVGSlice slice(z, 100.0, 60.0, 150.0, {85.0, 95.0, 105.0, 120.0},
                   {8.0, 9.5, 10.0, 9.0, 8.5});
    const LVGSlice coarse = coarsen_slice(slice, 4);
    CHECK(coarse.sigmas().size() <= 6);
    CHECK(coarse.z() == slice.z());
    // The spot stays a bin edge and the curve stays in the same ballpark.
    CHECK(coarse.time_value(100.0) ==
          doctest::Approx(slice.time_value(100.0)).epsilon(0.05));
}

TEST_CASE("assemble_model validates nesting") {
    const double z = std::sqrt(2.0 / 0.1);
    LVGSlice inner(z, 100.0, 80.0, 130.0, {}, {9.0});
    LVGSlice outer(z, 100.0, 60.0, 150.0, {}, {11.0});
    CHECK_THROWS_WITH_AS(assemble_model({outer, inner}, {0.1, 0.2}, 100.0),
                         doctest::Contains("NestingViolation"), DataError);
    CHECK_THROWS_WITH_AS(assemble_model({inner, outer}, {0.2, 0.1}, 100.0),
                         doctest::Contains("NestingViolation"), DataError);
}
