#pragma once

#include <functional>
#include <vector>

#include "lvg/market_data.hpp"
#include "lvg/piecewise_exp.hpp"

namespace lvg {

struct Deltas {
    double d1 = 0.5, d2 = 0.5, d3 = 0.5, d4 = 0.5;
};

// Previous-maturity time value, extended by zero outside its own bounds,
// together with the one-sided slopes needed at the current bounds.
struct PrevCurve {
    std::function<double(double)> value;  // defined on the whole real line
    double right_slope_at_lower = 0.0;    // d/dK value at the current L, from the right
    double left_slope_at_upper = 0.0;     // d/dK value at the current U, from the left

    static PrevCurve zero();
    static PrevCurve from_slice(const LVGSlice& slice, double lower, double upper);
};

// Frontier of a branch under construction: value A and left slope B at K.
struct FrontierState {
    double strike = 0.0;
    double value = 0.0;  // A
    double slope = 0.0;  // B
};

struct BranchBuild {
    std::vector<double> knots;   // partition points after L, last one is the spot
    std::vector<double> sigmas;  // one per segment, sigmas[j] on [prev knot, knots[j])
    FrontierState frontier;
};

double initial_derivative(double vbar1, double k1, double lower, double prev_right_slope,
                          double delta2);
double target_derivative(double vbar_j, double vbar_j1, double vbar_j2, double kj, double kj1,
                         double kj2, double delta3);
double intersection_w(const FrontierState& f, double b1, double kj1, double vbar_j1);
double crossing_y(const FrontierState& f, double kj1,
                  const std::function<double(double)>& prev_value);

// One recursion step: extend the branch from its frontier to the next strike,
// matching the market time value there and hitting left derivative b1.
// Adds two knots (three when the tangent line crosses the earlier curve).
void extend_to_strike(BranchBuild& branch, double kj1, double vbar_j1, double b1,
                      const std::function<double(double)>& prev_value, double z);

struct SpotInsertion {
    std::vector<double> strikes;
    std::vector<double> time_values;
    std::size_t spot_index = 0;
    bool inserted = false;
};

// Ensures the spot is one of the strikes; arrays include the endpoint rows
// (L, 0) and (U, 0).
SpotInsertion insert_spot_strike(const std::vector<double>& strikes,
                                 const std::vector<double>& time_values, double spot,
                                 double prev_at_spot, double delta1);

// Builds the full slice for one maturity: left branch up the strikes to the
// spot, right branch by the reflection K -> L+U-K, derivative jump -1 at the
// spot. Throws ContractError("MatchFailure") if any input value is not
// reproduced to 1e-9 * scale.
LVGSlice interpolate_slice(const std::vector<double>& strikes,
                           const std::vector<double>& time_values, double spot,
                           const PrevCurve& prev, const Deltas& deltas, double z);

// Full surface, one slice per maturity, recursing over maturities.
std::vector<LVGSlice> interpolate_surface(const AdmissiblePrices& prices, const Deltas& deltas,
                                          double z);

} // namespace lvg
