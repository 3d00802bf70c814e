#include <doctest.h>

#include <cmath>

#include "lvg/feasibility.hpp"
#include "lvg/numerics.hpp"

using namespace lvg;

namespace {

QuoteGrid bs_quotes(double spot, const std::vector<int>& days,
                    const std::vector<double>& strikes, double vol, double rel_spread) {
    QuoteGrid grid;
    grid.spot = spot;
    for (int d : days) {
        MaturityQuotes m;
        m.days = d;
        m.tau = d / kWorkingDaysPerYear;
        for (double k : strikes) {
            const double p = numerics::black_scholes_call(spot, k, m.tau, vol);
            const double w = std::max(rel_spread * p, 1e-4 * spot);
            m.quotes.push_back({k, std::max(p - w, 0.0), p + w, 100.0});
        }
        grid.maturities.push_back(std::move(m));
    }
    return grid;
}

} // namespace

TEST_CASE("complete_strike_grid counts variables") {
    // Single maturity, 3 strikes: no completion needed.
    const QuoteGrid one = bs_quotes(100.0, {25}, {90.0, 100.0, 110.0}, 0.2, 0.02);
    const auto bounds1 = choose_bounds(one, BoundsPolicy::widen(1.5));
    const FeasibilityProblem p1 = complete_strike_grid(one, bounds1, 0.01);
    CHECK(p1.n_vars == 3);
    CHECK(p1.maturities[0].traded == std::vector<bool>{true, true, true});

    // Second maturity adds strikes 95 and 105 inside the first's bounds.
    QuoteGrid two = bs_quotes(100.0, {25}, {90.0, 100.0, 110.0}, 0.2, 0.02);
    MaturityQuotes far;
    far.days = 50;
    far.tau = 50.0 / kWorkingDaysPerYear;
    for (double k : {85.0, 95.0, 105.0, 115.0}) {
        const double p = numerics::black_scholes_call(100.0, k, far.tau, 0.2);
        far.quotes.push_back({k, 0.98 * p, 1.02 * p, 100.0});
    }
    two.maturities.push_back(far);
    const auto bounds2 = choose_bounds(two, BoundsPolicy::widen(1.5));
    const FeasibilityProblem p2 = complete_strike_grid(two, bounds2, 0.01);
    // Maturity 1 gains the free strikes 95, 105 (85 and 115 sit on its bounds).
    CHECK(p2.n_vars == 9);
    CHECK(p2.maturities[0].strikes.size() == 5);
    CHECK(p2.maturities[0].traded == std::vector<bool>{true, false, true, false, true});
    CHECK(p2.maturities[1].strikes.size() == 4);
}

TEST_CASE("feasible market projects to admissible prices") {
    const QuoteGrid grid =
        bs_quotes(100.0, {25, 50}, {85.0, 95.0, 100.0, 105.0, 115.0}, 0.25, 0.01);
    const auto bounds = choose_bounds(grid, BoundsPolicy::widen(1.5));
    const double eps = 1e-4 * 100.0;
    const AdmissiblePrices out = solve_feasible_prices(complete_strike_grid(grid, bounds, eps), eps);

    const CheckReport report = check_strict_admissibility(out, eps);
    CHECK(report.ok());
    CHECK(out.margin == eps);

    // Traded prices must stay inside their bid/ask boxes.
    for (std::size_t i = 0; i < grid.maturities.size(); ++i)
        for (const Quote& q : grid.maturities[i].quotes) {
            const MaturityPrices& m = out.maturities[i];
            for (std::size_t j = 0; j < m.strikes.size(); ++j)
                if (m.strikes[j] == q.strike) {
                    CHECK(m.prices[j] >= q.bid - 1e-12);
                    CHECK(m.prices[j] <= q.ask + 1e-12);
                }
        }
}

TEST_CASE("solver is idempotent on already-feasible prices") {
    const QuoteGrid grid = bs_quotes(100.0, {25}, {90.0, 100.0, 110.0}, 0.25, 0.01);
    const auto bounds = choose_bounds(grid, BoundsPolicy::widen(1.5));
    const double eps = 1e-3;
    const AdmissiblePrices first =
        solve_feasible_prices(complete_strike_grid(grid, bounds, eps), eps);

    // Re-quote the solved prices with zero spread: the solution must be kept.
    QuoteGrid requote = grid;
    for (std::size_t j = 0; j < 3; ++j) {
        requote.maturities[0].quotes[j].bid = first.maturities[0].prices[j];
        requote.maturities[0].quotes[j].ask = first.maturities[0].prices[j];
    }
    const AdmissiblePrices second =
        solve_feasible_prices(complete_strike_grid(requote, bounds, eps), eps);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(second.maturities[0].prices[j] ==
              doctest::Approx(first.maturities[0].prices[j]).epsilon(1e-12));
}

TEST_CASE("crossed market is infeasible") {
    QuoteGrid grid = bs_quotes(100.0, {25}, {90.0, 100.0, 110.0}, 0.2, 0.001);
    // Force a price increasing in strike beyond any repair within the boxes.
    grid.maturities[0].quotes[0].bid = 1.0;
    grid.maturities[0].quotes[0].ask = 1.2;
    grid.maturities[0].quotes[1].bid = 8.0;
    grid.maturities[0].quotes[1].ask = 8.2;
    const auto bounds = choose_bounds(grid, BoundsPolicy::widen(1.5));
    CHECK_THROWS_WITH_AS(solve_feasible_prices(complete_strike_grid(grid, bounds, 1e-3), 1e-3),
                         doctest::Contains("Infeasible"), DataError);
}

TEST_CASE("untraded quotes ride in intrinsic-to-spot boxes") {
    QuoteGrid grid = bs_quotes(100.0, {25}, {90.0, 100.0, 110.0}, 0.2, 0.02);
    grid.maturities[0].quotes[2].volume = 0.0;
    grid.maturities[0].quotes[2].bid = 50.0;  // nonsense quote, must be ignored
    grid.maturities[0].quotes[2].ask = 60.0;
    const auto bounds = choose_bounds(grid, BoundsPolicy::widen(1.5));
    const double eps = 1e-3;
    const AdmissiblePrices out =
        solve_feasible_prices(complete_strike_grid(grid, bounds, eps), eps);
    CHECK(out.maturities[0].prices[2] < 10.0);
    CHECK(check_strict_admissibility(out, eps).ok());
}
