#include "lvg/smile_interp.hpp"

#include <algorithm>
#include <cmath>

#include "lvg/numerics.hpp"

namespace lvg {

using numerics::Direction;
using numerics::MonotoneRootProblem;

PrevCurve PrevCurve::zero() {
    PrevCurve p;
    p.value = [](double) { return 0.0; };
    return p;
}

PrevCurve PrevCurve::from_slice(const LVGSlice& slice, double lower, double upper) {
    PrevCurve p;
    p.value = [slice](double strike) {
        if (strike <= slice.lower() || strike >= slice.upper()) return 0.0;
        return slice.time_value(strike);
    };
    p.right_slope_at_lower =
        (lower == slice.lower()) ? slice.time_value_state(lower).slope : 0.0;
    p.left_slope_at_upper =
        (upper == slice.upper()) ? slice.time_value_state(upper).slope : 0.0;
    return p;
}

double initial_derivative(double vbar1, double k1, double lower, double prev_right_slope,
                          double delta2) {
    return delta2 * vbar1 / (k1 - lower) + (1.0 - delta2) * prev_right_slope;
}

double target_derivative(double vbar_j, double vbar_j1, double vbar_j2, double kj, double kj1,
                         double kj2, double delta3) {
    const double fwd = (vbar_j2 - vbar_j1) / (kj2 - kj1);
    const double bwd = (vbar_j1 - vbar_j) / (kj1 - kj);
    return delta3 * fwd + (1.0 - delta3) * bwd;
}

double intersection_w(const FrontierState& f, double b1, double kj1, double vbar_j1) {
    if (!(b1 > f.slope)) throw ContractError("intersection_w: target slope not above frontier");
    const double w =
        (vbar_j1 + f.slope * f.strike - f.value - b1 * kj1) / (f.slope - b1);
    if (!(w > f.strike && w < kj1))
        throw ContractError("intersection_w: intersection not interior to the strike interval");
    return w;
}

double crossing_y(const FrontierState& f, double kj1,
                  const std::function<double(double)>& prev_value) {
    auto line_gap = [&](double y) {
        return f.value + f.slope * (y - f.strike) - prev_value(y);
    };
    if (line_gap(kj1) >= 0.0) return kj1;

    // The gap is concave in y, zero or positive just right of the frontier,
    // and negative at kj1; find a positive probe and bisect for the root.
    double lo = f.strike;
    bool found = line_gap(lo) > 0.0;
    double step = kj1 - f.strike;
    for (int k = 0; !found && k < 60; ++k) {
        step *= 0.5;
        if (line_gap(f.strike + step) > 0.0) {
            lo = f.strike + step;
            found = true;
        }
    }
    if (!found) throw ContractError("crossing_y: frontier line never clears the earlier curve");

    MonotoneRootProblem problem;
    problem.evaluator = line_gap;
    problem.lo = lo;
    problem.hi = kj1;
    problem.direction = Direction::Decreasing;
    return numerics::bisect(problem);
}

namespace {

void extend_impl(BranchBuild& branch, double kj1, double vbar_j1, double b1,
                 const std::function<double(double)>& prev_value, double z, int depth) {
    const FrontierState f = branch.frontier;
    const double gap = kj1 - f.strike;
    if (!(f.slope < (vbar_j1 - f.value) / gap))
        throw ContractError("extend_to_strike: frontier slope violates the chord bound");

    const double w = intersection_w(f, b1, kj1, vbar_j1);
    const double y = crossing_y(f, kj1, prev_value);
    const double seed = z * gap;

    auto tilde = [&](double sigma, double width) {
        return propagate_segment({f.value, f.slope}, sigma, z, width);
    };

    if (w <= y) {
        // Two new segments [frontier, w] and [w, kj1]; outer sigma on the
        // first, inner sigma on the second.
        auto value_hat = [&](double sigma) {
            const ValueSlope t = tilde(sigma, w - f.strike);
            return t.value + t.slope * (kj1 - w) - vbar_j1;
        };
        MonotoneRootProblem hat;
        hat.evaluator = value_hat;
        hat.direction = Direction::Decreasing;
        const double sigma_hat = numerics::solve_monotone(hat, seed);

        auto inner_sigma = [&](double sigma) {
            const ValueSlope t = tilde(sigma, w - f.strike);
            MonotoneRootProblem inner;
            inner.evaluator = [&](double s) {
                return propagate_segment(t, s, z, kj1 - w).value - vbar_j1;
            };
            inner.direction = Direction::Decreasing;
            return numerics::solve_monotone(inner, seed);
        };
        MonotoneRootProblem outer;
        outer.evaluator = [&](double s) {
            const double sigma = sigma_hat + s;
            const ValueSlope t = tilde(sigma, w - f.strike);
            return propagate_segment(t, inner_sigma(sigma), z, kj1 - w).slope - b1;
        };
        outer.direction = Direction::Increasing;
        const double sigma_bar = sigma_hat + numerics::solve_monotone(outer, seed);
        const double sigma_tilde = inner_sigma(sigma_bar);

        const ValueSlope at_kj1 =
            propagate_segment(tilde(sigma_bar, w - f.strike), sigma_tilde, z, kj1 - w);
        branch.knots.push_back(w);
        branch.sigmas.push_back(sigma_bar);
        branch.knots.push_back(kj1);
        branch.sigmas.push_back(sigma_tilde);
        branch.frontier = {kj1, vbar_j1, at_kj1.slope};
        return;
    }

    // The frontier tangent crosses the earlier curve before w: pin the next
    // segment so the branch meets the earlier curve's value at kj1 when
    // continued linearly from y, then re-enter (guaranteed to land above).
    if (depth > 0) throw ContractError("extend_to_strike: repeated crossing of earlier curve");
    const double prev_kj1 = prev_value(kj1);
    auto value_bar = [&](double sigma) {
        const ValueSlope t = tilde(sigma, y - f.strike);
        return t.value + t.slope * (kj1 - y) - prev_kj1;
    };
    MonotoneRootProblem barp;
    barp.evaluator = value_bar;
    barp.direction = Direction::Decreasing;
    const double sigma_bar = numerics::solve_monotone(barp, seed);
    const ValueSlope at_y = tilde(sigma_bar, y - f.strike);

    branch.knots.push_back(y);
    branch.sigmas.push_back(sigma_bar);
    branch.frontier = {y, at_y.value, at_y.slope};
    extend_impl(branch, kj1, vbar_j1, b1, prev_value, z, depth + 1);
}

} // namespace

void extend_to_strike(BranchBuild& branch, double kj1, double vbar_j1, double b1,
                      const std::function<double(double)>& prev_value, double z) {
    extend_impl(branch, kj1, vbar_j1, b1, prev_value, z, 0);
}

SpotInsertion insert_spot_strike(const std::vector<double>& strikes,
                                 const std::vector<double>& time_values, double spot,
                                 double prev_at_spot, double delta1) {
    SpotInsertion out;
    out.strikes = strikes;
    out.time_values = time_values;
    for (std::size_t j = 0; j < strikes.size(); ++j)
        if (strikes[j] == spot) {
            out.spot_index = j;
            return out;
        }
    std::size_t j = 0;
    while (j + 1 < strikes.size() && !(strikes[j] < spot && spot < strikes[j + 1])) ++j;
    if (j + 1 >= strikes.size())
        throw ContractError("insert_spot_strike: spot outside the strike range");

    const double width = strikes[j + 1] - strikes[j];
    const double call_lo = time_values[j] + std::max(spot - strikes[j], 0.0);
    const double call_hi = time_values[j + 1] + std::max(spot - strikes[j + 1], 0.0);
    const double linear =
        call_lo * (strikes[j + 1] - spot) / width + call_hi * (spot - strikes[j]) / width;
    const double value = delta1 * linear + (1.0 - delta1) * std::max(prev_at_spot, call_hi);

    out.strikes.insert(out.strikes.begin() + j + 1, spot);
    out.time_values.insert(out.time_values.begin() + j + 1, value);
    out.spot_index = j + 1;
    out.inserted = true;
    return out;
}

namespace {

BranchBuild build_half(const std::vector<double>& ks, const std::vector<double>& vs,
                       std::size_t spot_idx, double prev_right_slope,
                       const std::function<double(double)>& prev_value, double final_b1,
                       const Deltas& deltas, double z) {
    BranchBuild branch;
    branch.frontier = {ks[0], 0.0,
                       initial_derivative(vs[1], ks[1], ks[0], prev_right_slope, deltas.d2)};
    for (std::size_t j = 1; j <= spot_idx; ++j) {
        const double b1 =
            (j < spot_idx)
                ? target_derivative(vs[j - 1], vs[j], vs[j + 1], ks[j - 1], ks[j], ks[j + 1],
                                    deltas.d3)
                : final_b1;
        extend_to_strike(branch, ks[j], vs[j], b1, prev_value, z);
    }
    return branch;
}

} // namespace

LVGSlice interpolate_slice(const std::vector<double>& strikes,
                           const std::vector<double>& time_values, double spot,
                           const PrevCurve& prev, const Deltas& deltas, double z) {
    const std::size_t n = strikes.size();
    if (n < 3 || time_values.size() != n)
        throw ContractError("interpolate_slice: need endpoints plus at least one strike");
    std::size_t jx = n;
    for (std::size_t j = 1; j + 1 < n; ++j)
        if (strikes[j] == spot) jx = j;
    if (jx == n) throw ContractError("interpolate_slice: spot is not an interior strike");

    const double lower = strikes.front();
    const double upper = strikes.back();
    const double refl = lower + upper;

    const double fwd = (time_values[jx + 1] - time_values[jx]) / (strikes[jx + 1] - strikes[jx]);
    const double bwd = (time_values[jx] - time_values[jx - 1]) / (strikes[jx] - strikes[jx - 1]);
    const double b1 = deltas.d4 + deltas.d4 * fwd + (1.0 - deltas.d4) * bwd;

    const BranchBuild left =
        build_half(strikes, time_values, jx, prev.right_slope_at_lower, prev.value, b1, deltas, z);

    std::vector<double> rks(n), rvs(n);
    for (std::size_t j = 0; j < n; ++j) {
        rks[j] = refl - strikes[n - 1 - j];
        rvs[j] = time_values[n - 1 - j];
    }
    auto prev_reflected = [&](double k) { return prev.value(refl - k); };
    const BranchBuild right = build_half(rks, rvs, n - 1 - jx, -prev.left_slope_at_upper,
                                         prev_reflected, 1.0 - b1, deltas, z);

    // left.knots ends with the spot; reflecting the right build (whose last
    // knot is the reflected spot) gives the partition points above the spot.
    std::vector<double> knots = left.knots;
    std::vector<double> sigmas = left.sigmas;
    for (std::size_t a = right.knots.size() - 1; a-- > 0;)
        knots.push_back(refl - right.knots[a]);
    for (std::size_t a = right.sigmas.size(); a-- > 0;) sigmas.push_back(right.sigmas[a]);

    LVGSlice slice(z, spot, lower, upper, knots, sigmas);
    const double scale = std::max(1.0, std::abs(spot));
    for (std::size_t j = 1; j + 1 < n; ++j)
        if (std::abs(slice.time_value(strikes[j]) - time_values[j]) > 1e-9 * scale)
            throw ContractError("MatchFailure: slice does not reproduce an input time value");
    return slice;
}

std::vector<LVGSlice> interpolate_surface(const AdmissiblePrices& prices, const Deltas& deltas,
                                          double z) {
    std::vector<LVGSlice> slices;
    for (std::size_t i = 0; i < prices.maturities.size(); ++i) {
        const MaturityPrices& m = prices.maturities[i];
        std::vector<double> ks{m.lower}, vs{0.0};
        for (std::size_t j = 0; j < m.strikes.size(); ++j) {
            ks.push_back(m.strikes[j]);
            vs.push_back(m.prices[j] - std::max(prices.spot - m.strikes[j], 0.0));
        }
        ks.push_back(m.upper);
        vs.push_back(0.0);

        const PrevCurve prev = (i == 0) ? PrevCurve::zero()
                                        : PrevCurve::from_slice(slices[i - 1], m.lower, m.upper);
        const SpotInsertion ins =
            insert_spot_strike(ks, vs, prices.spot, prev.value(prices.spot), deltas.d1);
        LVGSlice slice =
            interpolate_slice(ins.strikes, ins.time_values, prices.spot, prev, deltas, z);

        for (int k = 0; k < 1000; ++k) {
            const double strike = m.lower + (m.upper - m.lower) * (k + 0.5) / 1000.0;
            if (!(slice.time_value(strike) > prev.value(strike)))
                throw ContractError("MonotonicityFailure: slice does not dominate the previous "
                                    "maturity");
        }
        for (std::size_t l = i + 1; l < prices.maturities.size(); ++l) {
            const MaturityPrices& later = prices.maturities[l];
            for (std::size_t j = 0; j < later.strikes.size(); ++j) {
                const double strike = later.strikes[j];
                if (!(strike > m.lower && strike < m.upper)) continue;
                const double tv = later.prices[j] - std::max(prices.spot - strike, 0.0);
                if (!(slice.time_value(strike) < tv))
                    throw ContractError("MonotonicityFailure: slice crosses a later maturity's "
                                        "market time value");
            }
        }
        slices.push_back(std::move(slice));
    }
    return slices;
}

} // namespace lvg
