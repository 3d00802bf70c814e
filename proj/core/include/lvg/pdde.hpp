#pragma once

#include <functional>
#include <vector>

#include "lvg/errors.hpp"

namespace lvg {

// Spatial grid on [L, U] with coefficient samples a^2 at every node (right
// limits at coefficient jumps). Knots of piecewise-constant coefficients are
// inserted as nodes so second-order accuracy survives the jumps.
struct SpatialGrid {
    std::vector<double> nodes;  // x_0 = L < ... < x_{n+1} = U
    std::vector<double> a2;     // same length as nodes

    double lower() const { return nodes.front(); }
    double upper() const { return nodes.back(); }
};

SpatialGrid make_grid(double lower, double upper, int n_interior,
                      const std::vector<double>& forced_nodes,
                      const std::function<double(double)>& a2);

// Solves (a^2/2) u'' - u/t* = -source/t* with u = 0 at both ends, by direct
// tridiagonal elimination of the central-difference system.
std::vector<double> solve_backward_step(const SpatialGrid& grid, double tstar,
                                        const std::vector<double>& source);

struct PDDESolution {
    SpatialGrid grid;
    std::vector<std::vector<double>> values;  // one vector per maturity step

    double value_at(std::size_t step, double x) const;  // linear interpolation
};

struct PDDEStep {
    std::function<double(double)> a2;
    std::vector<double> forced_nodes;  // coefficient knots
    double tstar = 0.0;
};

// Chains backward steps for a European payoff. The payoff's affine part
// (through its boundary values) propagates unchanged; the remainder runs
// through the zero-boundary solver.
PDDESolution propagate_european(double lower, double upper, int n_interior,
                                const std::function<double(double)>& payoff,
                                const std::vector<PDDEStep>& schedule);

// One forward (strike-space) step: (a^2/2) C'' - (C - C_prev)/t* = 0 with
// boundary values spot-L and 0. `prev` must carry the same boundary values.
std::vector<double> dupire_forward_step(const SpatialGrid& grid, double tstar, double spot,
                                        const std::vector<double>& prev);

} // namespace lvg
