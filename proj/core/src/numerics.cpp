#include "lvg/numerics.hpp"

#include <cmath>

namespace lvg::numerics {

double bisect(const MonotoneRootProblem& problem) {
    double lo = problem.lo;
    double hi = problem.hi;
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw ContractError("bisect: invalid bracket");

    double flo = problem.evaluator(lo);
    double fhi = problem.evaluator(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw ContractError("NoSignChange: bracket does not straddle a root");

    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < problem.max_iter; ++it) {
        mid = 0.5 * (lo + hi);
        if (hi - lo <= problem.abs_tol + problem.rel_tol * std::abs(mid)) return mid;
        const double fmid = problem.evaluator(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    // Doubles bottom out well before 200 halvings of any finite interval.
    if (hi - lo <= problem.abs_tol + problem.rel_tol * std::abs(mid)) return mid;
    throw ContractError("MaxIterExceeded in bisect");
}

std::pair<double, double> expand_bracket(const std::function<double(double)>& evaluator,
                                         double seed, Direction direction) {
    if (!(seed > 0.0)) throw ContractError("expand_bracket: seed must be positive");
    const double fs = evaluator(seed);
    if (fs == 0.0) return {seed * 0.5, seed * 2.0};

    // For an increasing f, a positive value means the root is below; for a
    // decreasing f it is above. Move geometrically until the sign flips.
    const bool root_below = (direction == Direction::Increasing) ? (fs > 0.0) : (fs < 0.0);
    double near = seed;
    double far = seed;
    for (int k = 0; k < 200; ++k) {
        far = root_below ? far * 0.5 : far * 2.0;
        const double ff = evaluator(far);
        if (ff == 0.0 || ((ff > 0.0) != (fs > 0.0)))
            return root_below ? std::make_pair(far, near) : std::make_pair(near, far);
        near = far;
    }
    throw ContractError("BracketNotFound: no sign change on (0,inf)");
}

double solve_monotone(MonotoneRootProblem problem, double seed) {
    if (!std::isfinite(problem.hi)) {
        auto [lo, hi] = expand_bracket(problem.evaluator, seed, problem.direction);
        problem.lo = lo;
        problem.hi = hi;
    }
    return bisect(problem);
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double black_scholes_call(double spot, double strike, double tau, double vol) {
    if (vol <= 0.0 || tau <= 0.0) return std::max(spot - strike, 0.0);
    const double sq = vol * std::sqrt(tau);
    const double d1 = std::log(spot / strike) / sq + 0.5 * sq;
    const double d2 = d1 - sq;
    return spot * norm_cdf(d1) - strike * norm_cdf(d2);
}

double implied_vol(double price, double strike, double spot, double tau) {
    if (!(tau > 0.0)) throw DataError("implied_vol: tau must be positive");
    const double intrinsic = std::max(spot - strike, 0.0);
    if (!(price > intrinsic) || !(price < spot))
        throw DataError("OutOfBand: price outside the open no-arbitrage band");

    MonotoneRootProblem p;
    p.evaluator = [=](double vol) { return black_scholes_call(spot, strike, tau, vol) - price; };
    p.direction = Direction::Increasing;
    p.abs_tol = 1e-12;
    p.rel_tol = 0.0;
    return solve_monotone(p, 0.2);
}

} // namespace lvg::numerics
