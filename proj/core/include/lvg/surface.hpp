#pragma once

#include <functional>
#include <vector>

#include "lvg/piecewise_exp.hpp"

namespace lvg {

// Piecewise-constant function on [knots.front(), knots.back()], closed-left
// segments; values[j] on [knots[j], knots[j+1]).
struct PiecewiseConstant {
    std::vector<double> knots;
    std::vector<double> values;
    double at(double x) const;
};

// Calibrated non-homogeneous model: one slice per maturity interval, with the
// local variance on (T_{m-1}, T_m] read off the calendar spread.
struct NonHomLVGModel {
    double z = 0.0;
    double spot = 0.0;
    std::vector<double> maturities;  // T_1 < ... < T_M, year fractions
    std::vector<LVGSlice> slices;

    double tstar(std::size_t m) const;  // T_m - T_{m-1}, zero-based m

    // Market price curve of maturity index m, extended outside its bounds by
    // the earlier curves, down to the intrinsic value.
    double call_price(std::size_t m, double strike) const;
};

// a^2_m(K) = (2/t*_m) (C^m(K) - C^{m-1}(K)) / d^2C^m/dK^2, evaluated through
// the slice closed forms; right limits at knots.
double local_variance(const NonHomLVGModel& model, std::size_t m, double strike);

// a^2(K) = (2/tau*) (C(K) - (x-K)^+) / C''(K) for a single analytic curve.
// Throws DataError("DegenerateDensity") where the second derivative is not
// strictly positive.
std::function<double(double)> single_smile_calibration(
    std::function<double(double)> price, std::function<double(double)> second_derivative,
    double spot, double tau_star);

// Per-bin harmonic averaging: the output preserves the integral of 1/a^2 on
// every bin. Bin edges must span the coefficient's domain.
PiecewiseConstant coarsen_coefficient(const PiecewiseConstant& a2,
                                      const std::vector<double>& bin_edges);

// Replaces each slice's squared coefficient by its coarsened version on
// equal bins of (L, U); the spot is kept as a bin edge.
LVGSlice coarsen_slice(const LVGSlice& slice, int bins);

NonHomLVGModel assemble_model(std::vector<LVGSlice> slices, std::vector<double> maturities,
                              double spot);

} // namespace lvg
