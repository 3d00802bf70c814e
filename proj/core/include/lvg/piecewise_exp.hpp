#pragma once

#include <utility>
#include <vector>

#include "lvg/errors.hpp"

namespace lvg {

// Value and slope of a function at a point.
struct ValueSlope {
    double value = 0.0;
    double slope = 0.0;
};

// Closed-form solution of a^2 V'' = z^2 V with piecewise-constant a, stored
// segment-locally: on [nu[j], nu[j+1]) the function is
//   A_j cosh(z (K - nu[j]) / sigma[j]) + (sigma[j] B_j / z) sinh(z (K - nu[j]) / sigma[j]).
// Equivalent to the global c1 e^{-Kz/s} + c2 e^{Kz/s} form but free of
// exponential overflow in the coefficients.
class ExpBranch {
public:
    ExpBranch() = default;

    // knots nu_0 < ... < nu_{n+1}; sigma_1..sigma_{n+1} > 0; (value, slope)
    // prescribed at the left end nu_0. The branch is C^1 across knots.
    ExpBranch(std::vector<double> knots, std::vector<double> sigmas, ValueSlope at_left, double z);

    // Closed-left segments: evaluation exactly at a knot uses the right segment.
    ValueSlope eval(double strike) const;

    double left() const { return knots_.front(); }
    double right() const { return knots_.back(); }
    double z() const { return z_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& sigmas() const { return sigmas_; }
    double sigma_at(double strike) const;

    // (value, slope) at the start of each segment.
    const std::vector<ValueSlope>& segment_states() const { return states_; }

private:
    std::vector<double> knots_;
    std::vector<double> sigmas_;
    std::vector<ValueSlope> states_;
    double z_ = 1.0;

    std::size_t segment_index(double strike) const;
};

// Value and slope a distance `width` to the right of a point with state
// (value, slope), under coefficient sigma: the single-segment propagator.
ValueSlope propagate_segment(ValueSlope at_left, double sigma, double z, double width);

// C^1 matching across a knot where the coefficient jumps from sigma_j to
// sigma_{j+1}: the state carries over unchanged (upward recursion).
ValueSlope propagate_up(ValueSlope at_knot, double sigma_lo, double sigma_hi);

// Mirror image for the right branch (downward recursion); identical state
// carry-over, kept separate to mark the direction of the build.
ValueSlope propagate_down(ValueSlope at_knot, double sigma_hi, double sigma_lo);

// lambda scaling factors matching value and the -1 derivative jump at the
// spot from unit branches: v1,d1 from V^1(1,.), v2,d2 from V^2(1,.) at x.
std::pair<double, double> solve_lambda_pair(double v1, double d1, double v2, double d2);

// Single-maturity LVG slice: piecewise-constant coefficient model with its
// time-value curve on (L, U).
class LVGSlice {
public:
    // interior_knots strictly inside (lower, upper); sigmas sized
    // interior_knots.size() + 1; spot strictly inside (lower, upper).
    LVGSlice(double z, double spot, double lower, double upper,
             std::vector<double> interior_knots, std::vector<double> sigmas);

    double time_value(double strike) const;
    // One-sided at the spot: left slope for strike <= spot, right slope after.
    ValueSlope time_value_state(double strike) const;
    double call_price(double strike) const;        // time value + intrinsic
    double density(double strike) const;           // d^2 C / dK^2 = z^2 V / sigma^2
    double right_derivative(double strike) const;  // of the time value

    double z() const { return z_; }
    double spot() const { return spot_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    const std::vector<double>& interior_knots() const { return interior_knots_; }
    // All knots including L and U; sigmas()[j] applies on [knots()[j], knots()[j+1]).
    const std::vector<double>& knots() const { return full_knots_; }
    const std::vector<double>& sigmas() const { return sigmas_; }
    double tstar() const { return 2.0 / (z_ * z_); }
    double sigma_at(double strike) const;
    double lambda_left() const { return lambda1_; }
    double lambda_right() const { return lambda2_; }

private:
    double z_, spot_, lower_, upper_;
    std::vector<double> interior_knots_;
    std::vector<double> full_knots_;
    std::vector<double> sigmas_;
    ExpBranch left_;             // unit branch on [L, x], natural coordinates
    ExpBranch right_reflected_;  // unit branch on [L, x'] in K' = L+U-K coordinates
    double lambda1_ = 0.0, lambda2_ = 0.0;
};

} // namespace lvg
