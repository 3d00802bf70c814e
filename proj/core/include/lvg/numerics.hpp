#pragma once

#include <functional>
#include <limits>

#include "lvg/errors.hpp"

namespace lvg::numerics {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Direction { Increasing, Decreasing };

struct MonotoneRootProblem {
    std::function<double(double)> evaluator;
    double lo = 0.0;
    double hi = kInf;  // +inf means: bracket by geometric expansion first
    Direction direction = Direction::Increasing;
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_iter = 200;
};

// Bisection on a bracketed sign change. Requires finite lo < hi.
// Throws ContractError("NoSignChange") if f(lo) and f(hi) have the same sign,
// ContractError("MaxIterExceeded") if the interval does not shrink in time.
double bisect(const MonotoneRootProblem& problem);

// Finds a finite bracket [lo, hi] with f(lo)*f(hi) < 0 for a function that is
// strictly monotone on (0, inf), by doubling/halving from `seed`.
// Throws ContractError("BracketNotFound") after 200 doublings.
std::pair<double, double> expand_bracket(const std::function<double(double)>& evaluator,
                                         double seed, Direction direction);

// Convenience: bracket (if hi is +inf) then bisect.
double solve_monotone(MonotoneRootProblem problem, double seed = 1.0);

double norm_cdf(double x);

// Zero-rate Black-Scholes call price.
double black_scholes_call(double spot, double strike, double tau, double vol);

// Inverts the zero-rate Black-Scholes call price in volatility.
// Requires (spot-strike)^+ < price < spot; throws DataError("OutOfBand") otherwise.
double implied_vol(double price, double strike, double spot, double tau);

} // namespace lvg::numerics
