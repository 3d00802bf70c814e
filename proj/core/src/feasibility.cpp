#include "lvg/feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace lvg {

FeasibilityProblem complete_strike_grid(const QuoteGrid& grid,
                                        const std::vector<std::pair<double, double>>& bounds,
                                        double eps) {
    if (bounds.size() != grid.maturities.size())
        throw ContractError("complete_strike_grid: bounds/maturities size mismatch");
    FeasibilityProblem problem;
    problem.spot = grid.spot;
    problem.eps = eps;

    for (std::size_t i = 0; i < grid.maturities.size(); ++i) {
        const MaturityQuotes& m = grid.maturities[i];
        FeasibilityProblem::Maturity out;
        out.days = m.days;
        out.tau = m.tau;
        out.lower = bounds[i].first;
        out.upper = bounds[i].second;

        std::vector<double> strikes;
        for (const Quote& q : m.quotes) strikes.push_back(q.strike);
        for (std::size_t l = i + 1; l < grid.maturities.size(); ++l)
            for (const Quote& q : grid.maturities[l].quotes)
                if (q.strike > out.lower && q.strike < out.upper &&
                    std::find(strikes.begin(), strikes.end(), q.strike) == strikes.end())
                    strikes.push_back(q.strike);
        std::sort(strikes.begin(), strikes.end());

        for (double k : strikes) {
            const Quote* quote = nullptr;
            for (const Quote& q : m.quotes)
                if (q.strike == k) quote = &q;
            const double intrinsic = std::max(grid.spot - k, 0.0);
            if (quote != nullptr && quote->volume > 0.0) {
                out.strikes.push_back(k);
                out.box_lo.push_back(quote->bid);
                out.box_hi.push_back(quote->ask);
                out.traded.push_back(true);
            } else {
                out.strikes.push_back(k);
                out.box_lo.push_back(intrinsic);
                out.box_hi.push_back(grid.spot);
                out.traded.push_back(false);
            }
        }
        problem.offsets.push_back(problem.n_vars);
        problem.n_vars += out.strikes.size();
        problem.maturities.push_back(std::move(out));
    }
    return problem;
}

std::vector<LinearConstraint> FeasibilityProblem::constraints() const {
    std::vector<LinearConstraint> rows;
    for (std::size_t i = 0; i < maturities.size(); ++i) {
        const Maturity& m = maturities[i];
        const std::size_t off = offsets[i];
        const std::size_t n = m.strikes.size();
        const std::string tag = "maturity " + std::to_string(m.days) + " days: ";

        // Augmented graph nodes: (lower, spot-lower), strikes, (upper, 0).
        auto node_strike = [&](std::size_t a) {
            return a == 0 ? m.lower : (a == n + 1 ? m.upper : m.strikes[a - 1]);
        };
        auto node_term = [&](std::size_t a, double coef, LinearConstraint& row) {
            if (a == 0)
                row.constant += coef * (spot - m.lower);
            else if (a <= n)
                row.terms.emplace_back(off + a - 1, coef);
        };

        for (std::size_t a = 0; a + 1 <= n + 1; ++a) {
            LinearConstraint row;
            node_term(a, 1.0, row);
            node_term(a + 1, -1.0, row);
            row.label = tag + "decreasing";
            rows.push_back(std::move(row));
        }
        for (std::size_t a = 1; a <= n; ++a) {
            const double kl = node_strike(a - 1), km = node_strike(a), kr = node_strike(a + 1);
            const double theta = (kr - km) / (kr - kl);
            LinearConstraint row;
            node_term(a - 1, theta, row);
            node_term(a + 1, 1.0 - theta, row);
            node_term(a, -1.0, row);
            row.label = tag + "convexity";
            rows.push_back(std::move(row));
        }
        for (std::size_t j = 0; j < n; ++j) {
            LinearConstraint row;
            row.terms.emplace_back(off + j, 1.0);
            row.constant -= std::max(spot - m.strikes[j], 0.0);
            row.label = tag + "intrinsic";
            rows.push_back(std::move(row));
        }
        if (i > 0) {
            const Maturity& prev = maturities[i - 1];
            for (std::size_t j = 0; j < n; ++j) {
                if (!(m.strikes[j] > prev.lower && m.strikes[j] < prev.upper)) continue;
                for (std::size_t jj = 0; jj < prev.strikes.size(); ++jj) {
                    if (prev.strikes[jj] != m.strikes[j]) continue;
                    LinearConstraint row;
                    row.terms.emplace_back(off + j, 1.0);
                    row.terms.emplace_back(offsets[i - 1] + jj, -1.0);
                    row.label = tag + "calendar";
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

AdmissiblePrices solve_feasible_prices(const FeasibilityProblem& problem, double eps) {
    if (!(eps > 0.0)) throw DataError("solve_feasible_prices: eps must be positive");
    const std::vector<LinearConstraint> rows = problem.constraints();

    std::vector<double> p(problem.n_vars);
    for (std::size_t i = 0; i < problem.maturities.size(); ++i) {
        const auto& m = problem.maturities[i];
        for (std::size_t j = 0; j < m.strikes.size(); ++j)
            p[problem.offsets[i] + j] = 0.5 * (m.box_lo[j] + m.box_hi[j]);
    }
    auto clamp_boxes = [&]() {
        for (std::size_t i = 0; i < problem.maturities.size(); ++i) {
            const auto& m = problem.maturities[i];
            for (std::size_t j = 0; j < m.strikes.size(); ++j) {
                double& v = p[problem.offsets[i] + j];
                v = std::min(std::max(v, m.box_lo[j]), m.box_hi[j]);
            }
        }
    };
    auto slack = [&](const LinearConstraint& row) {
        double s = row.constant;
        for (const auto& [idx, coef] : row.terms) s += coef * p[idx];
        return s;
    };

    // Project onto halfspaces tightened to 1.01*eps; declare convergence at
    // the start of a sweep once every row clears eps, so an already-feasible
    // input is returned untouched.
    const double target = 1.01 * eps;
    const int max_sweeps = 100000;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool done = true;
        for (const LinearConstraint& row : rows)
            if (slack(row) < eps) {
                done = false;
                break;
            }
        if (done) {
            AdmissiblePrices out;
            out.spot = problem.spot;
            out.margin = eps;
            for (std::size_t i = 0; i < problem.maturities.size(); ++i) {
                const auto& m = problem.maturities[i];
                MaturityPrices mp;
                mp.days = m.days;
                mp.tau = m.tau;
                mp.lower = m.lower;
                mp.upper = m.upper;
                mp.strikes = m.strikes;
                mp.prices.assign(p.begin() + problem.offsets[i],
                                 p.begin() + problem.offsets[i] + m.strikes.size());
                out.maturities.push_back(std::move(mp));
            }
            return out;
        }
        for (const LinearConstraint& row : rows) {
            const double s = slack(row);
            if (s >= target) continue;
            double norm2 = 0.0;
            for (const auto& [idx, coef] : row.terms) norm2 += coef * coef;
            if (norm2 == 0.0) throw DataError("Infeasible: contradictory fixed constraint");
            const double step = (target - s) / norm2;
            for (const auto& [idx, coef] : row.terms) p[idx] += coef * step;
        }
        clamp_boxes();
    }
    throw DataError("Infeasible: projection sweep cap reached; quotes admit no strictly "
                    "admissible prices at this eps");
}

} // namespace lvg
