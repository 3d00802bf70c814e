#pragma once

#include <utility>
#include <vector>

#include "lvg/market_data.hpp"

namespace lvg {

// One affine inequality sum_t coef * p[index] + constant >= slack.
struct LinearConstraint {
    std::vector<std::pair<std::size_t, double>> terms;
    double constant = 0.0;
    std::string label;
};

struct FeasibilityProblem {
    double spot = 0.0;
    double eps = 0.0;
    // Completed rectangular layout: cell (i, j) -> variable index offsets[i] + j.
    struct Maturity {
        int days = 0;
        double tau = 0.0;
        double lower = 0.0, upper = 0.0;
        std::vector<double> strikes;
        std::vector<double> box_lo, box_hi;  // [bid, ask] if traded, else [intrinsic, spot]
        std::vector<bool> traded;
    };
    std::vector<Maturity> maturities;
    std::vector<std::size_t> offsets;
    std::size_t n_vars = 0;

    // Strict-admissibility rows in deterministic maturity-major order;
    // each row wants slack >= eps.
    std::vector<LinearConstraint> constraints() const;
};

// Adds every strike quoted at a later maturity (and lying strictly inside an
// earlier maturity's bounds) to that earlier maturity as a free variable.
FeasibilityProblem complete_strike_grid(const QuoteGrid& grid,
                                        const std::vector<std::pair<double, double>>& bounds,
                                        double eps);

// Cyclic projection onto the eps-tightened halfspaces and the bid/ask boxes,
// starting from box midpoints. Throws DataError("Infeasible") at the sweep cap.
AdmissiblePrices solve_feasible_prices(const FeasibilityProblem& problem, double eps);

} // namespace lvg
