#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "lvg/numerics.hpp"
#include "lvg/pdde.hpp"
#include "lvg/smile_interp.hpp"

namespace {

lvg::AdmissiblePrices bs_surface(std::size_t n_maturities) {
    lvg::AdmissiblePrices prices;
    prices.spot = 100.0;
    prices.margin = 1e-9;
    const std::vector<double> strikes{85.0, 90.0, 95.0, 100.0, 105.0, 110.0, 115.0};
    for (std::size_t i = 0; i < n_maturities; ++i) {
        lvg::MaturityPrices m;
        m.days = 10 * static_cast<int>(i + 1);
        m.tau = m.days / lvg::kWorkingDaysPerYear;
        m.lower = 50.0;
        m.upper = 200.0;
        const double vol = 0.2 + 0.01 * i;
        for (double k : strikes) {
            m.strikes.push_back(k);
            m.prices.push_back(lvg::numerics::black_scholes_call(100.0, k, m.tau, vol));
        }
        prices.maturities.push_back(std::move(m));
    }
    return prices;
}

void bm_slice_eval(benchmark::State& state) {
    const double z = std::sqrt(2.0 / 0.1);
    lvg::LVGSlice slice(z, 100.0, 60.0, 150.0, {85.0, 95.0, 105.0, 120.0},
                        {8.0, 9.5, 10.0, 9.0, 8.5});
    double k = 61.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(slice.call_price(k));
        k += 0.37;
        if (k > 149.0) k = 61.0;
    }
}
BENCHMARK(bm_slice_eval);

void bm_calibrate_surface(benchmark::State& state) {
    const lvg::AdmissiblePrices prices = bs_surface(static_cast<std::size_t>(state.range(0)));
    const double z = std::sqrt(2.0 / prices.maturities[0].tau);
    for (auto _ : state)
        benchmark::DoNotOptimize(lvg::interpolate_surface(prices, lvg::Deltas{}, z));
}
BENCHMARK(bm_calibrate_surface)->Arg(1)->Arg(3)->Arg(6);

void bm_backward_step(benchmark::State& state) {
    const lvg::SpatialGrid grid = lvg::make_grid(
        0.0, 1.0, static_cast<int>(state.range(0)), {}, [](double) { return 1.0; });
    std::vector<double> source(grid.nodes.size(), 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(lvg::solve_backward_step(grid, 0.1, source));
}
BENCHMARK(bm_backward_step)->Arg(256)->Arg(2048);

} // namespace

BENCHMARK_MAIN();
