#include <doctest.h>

#include <cmath>
#include <vector>

#include "lvg/numerics.hpp"
#include "lvg/smile_interp.hpp"

using namespace lvg;

namespace {

AdmissiblePrices bs_surface(double spot, const std::vector<int>& days,
                            const std::vector<double>& strikes,
                            const std::vector<double>& vols, double lower, double upper) {
    AdmissiblePrices prices;
    prices.spot = spot;
    prices.margin = 1e-9;
    for (std::size_t i = 0; i < days.size(); ++i) {
        MaturityPrices m;
        m.days = days[i];
        m.tau = days[i] / kWorkingDaysPerYear;
        m.lower = lower;
        m.upper = upper;
        for (double k : strikes) {
            m.strikes.push_back(k);
            m.prices.push_back(numerics::black_scholes_call(spot, k, m.tau, vols[i]));
        }
        prices.maturities.push_back(std::move(m));
    }
    return prices;
}

} // namespace

TEST_CASE("single maturity reprices Black-Scholes inputs exactly") {
    const AdmissiblePrices prices =
        bs_surface(100.0, {25}, {95.0, 100.0, 105.0}, {0.2}, 50.0, 200.0);
    const double z = std::sqrt(2.0 / prices.maturities[0].tau);
    const std::vector<LVGSlice> slices = interpolate_surface(prices, Deltas{}, z);
    REQUIRE(slices.size() == 1);
    const MaturityPrices& m = prices.maturities[0];
    for (std::size_t j = 0; j < m.strikes.size(); ++j)
        CHECK(slices[0].call_price(m.strikes[j]) ==
              doctest::Approx(m.prices[j]).epsilon(1e-10));
}

TEST_CASE("knot count stays within 3(N+2)") {
    const std::vector<double> strikes{80.0, 90.0, 95.0, 100.0, 105.0, 110.0, 120.0};
    const AdmissiblePrices prices =
        bs_surface(100.0, {10, 30, 60}, strikes, {0.2, 0.22, 0.25}, 40.0, 250.0);
    const double z = std::sqrt(2.0 / prices.maturities[0].tau);
    const std::vector<LVGSlice> slices = interpolate_surface(prices, Deltas{}, z);
    for (const LVGSlice& s : slices)
        CHECK(s.interior_knots().size() <= 3 * (strikes.size() + 2));
}

TEST_CASE("slice interpolant is arbitrage free") {
    const std::vector<double> strikes{85.0, 95.0, 100.0, 105.0, 115.0};
    const AdmissiblePrices prices =
        bs_surface(100.0, {20, 40}, strikes, {0.25, 0.28}, 50.0, 200.0);
    const double z = std::sqrt(2.0 / prices.maturities[0].tau);
    const std::vector<LVGSlice> slices = interpolate_surface(prices, Deltas{}, z);

    for (const LVGSlice& s : slices) {
        double prev_price = s.call_price(50.0 + 1e-9);
        for (int g = 1; g <= 999; ++g) {
            const double k = 50.0 + 150.0 * g / 1000.0;
            const double price = s.call_price(k);
            CHECK(price < prev_price);                      // strictly decreasing
            CHECK(s.density(k) > 0.0);                      // convex
            CHECK(price > std::max(100.0 - k, 0.0) - 1e-12);  // above intrinsic
            prev_price = price;
        }
        const double jump = s.right_derivative(100.0) - s.time_value_state(100.0).slope;
        CHECK(jump == doctest::Approx(-1.0).epsilon(1e-10));
    }

    // Later slice strictly dominates the earlier one between the bounds.
    for (int g = 1; g < 1000; ++g) {
        const double k = 50.0 + 150.0 * g / 1000.0;
        CHECK(slices[1].time_value(k) > slices[0].time_value(k));
    }
}

TEST_CASE("reflected input produces the reflected slice") {
    const std::vector<double> strikes{90.0, 100.0, 110.0};
    const AdmissiblePrices prices = bs_surface(100.0, {25}, strikes, {0.2}, 60.0, 140.0);
    const double z = std::sqrt(2.0 / prices.maturities[0].tau);
    const LVGSlice direct = interpolate_surface(prices, Deltas{}, z)[0];

    // Mirror the market through K -> 200 - K; time values transfer unchanged.
    AdmissiblePrices mirrored = prices;
    MaturityPrices& m = mirrored.maturities[0];
    for (std::size_t j = 0; j < strikes.size(); ++j) {
        m.strikes[j] = 200.0 - strikes[strikes.size() - 1 - j];
        const double orig = prices.maturities[0].prices[strikes.size() - 1 - j];
        const double tv = orig - std::max(100.0 - strikes[strikes.size() - 1 - j], 0.0);
        m.prices[j] = tv + std::max(100.0 - m.strikes[j], 0.0);
    }
    const LVGSlice mirror = interpolate_surface(mirrored, Deltas{}, z)[0];
    for (double k : {75.0, 92.0, 100.0, 108.0, 125.0})
        CHECK(mirror.time_value(200.0 - k) ==
              doctest::Approx(direct.time_value(k)).epsilon(1e-9));
}

TEST_CASE("tuning deltas moves the interpolant but not the matched prices") {
    const std::vector<double> strikes{90.0, 100.0, 110.0};
    const AdmissiblePrices prices = bs_surface(100.0, {25}, strikes, {0.2}, 60.0, 140.0);
    const double z = std::sqrt(2.0 / prices.maturities[0].tau);
    const LVGSlice a = interpolate_surface(prices, Deltas{}, z)[0];
    const LVGSlice b = interpolate_surface(prices, Deltas{0.5, 0.5, 0.2, 0.7}, z)[0];
    for (std::size_t j = 0; j < strikes.size(); ++j) {
        CHECK(a.call_price(strikes[j]) ==
              doctest::Approx(prices.maturities[0].prices[j]).epsilon(1e-10));
        CHECK(b.call_price(strikes[j]) ==
              doctest::Approx(prices.maturities[0].prices[j]).epsilon(1e-10));
    }
}

TEST_CASE("insert_spot_strike blends neighbouring call prices") {
    // Strikes 90, 110 around a spot of 100, endpoints (60, 40) and (140, 0).
    const std::vector<double> strikes{60.0, 90.0, 110.0, 140.0};
    const std::vector<double> tv{0.0, 3.0, 2.0, 0.0};
    const SpotInsertion ins = insert_spot_strike(strikes, tv, 100.0, 0.0, 0.5);
    REQUIRE(ins.inserted);
    REQUIRE(ins.strikes.size() == 5);
    CHECK(ins.strikes[ins.spot_index] == 100.0);
    // Call prices at 90 and 110 are 13 and 2; the midpoint in calls is 7.5,
    // which carries a time value of 7.5 at the spot for delta1 = 1.
    const SpotInsertion full = insert_spot_strike(strikes, tv, 100.0, 0.0, 1.0);
    CHECK(full.time_values[full.spot_index] == doctest::Approx(7.5).epsilon(1e-12));
}
