#pragma once

#include <cstdint>
#include <random>

#include "lvg/piecewise_exp.hpp"
#include "lvg/surface.hpp"

namespace lvg {

struct GammaClock {
    double tstar = 0.0;  // characteristic time, years
    double alpha = 0.0;  // rate; alpha * tstar == 1 for the unbiased clock

    static GammaClock unbiased(double tstar) { return {tstar, 1.0 / tstar}; }
};

struct McEstimate {
    double price = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    int n_steps = 0;
    double mean_underlying = 0.0;  // martingale check: should sit near the spot
    double mean_underlying_se = 0.0;
};

// Deterministic per-path substream seeding (order-independent).
std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path);

// Draw of the clock at calendar time t: Gamma(shape t/t*, rate alpha).
double sample_gamma(double t, const GammaClock& clock, std::mt19937_64& rng);

// Prices the call by subordinating an Euler-discretized diffusion with
// coefficient slice.sigma_at to the unbiased clock, absorbing at the bounds;
// maturity is the slice's own t*.
McEstimate simulate_slice_call(const LVGSlice& slice, double strike, long n_paths, int n_steps,
                               std::uint64_t seed);

// Only the first maturity interval reduces to a homogeneous simulation.
McEstimate simulate_nonhom_first_interval(const NonHomLVGModel& model, double maturity,
                                          double strike, long n_paths, int n_steps,
                                          std::uint64_t seed);

} // namespace lvg
