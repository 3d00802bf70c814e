#include "lvg/pdde.hpp"

#include <algorithm>
#include <cmath>

namespace lvg {

SpatialGrid make_grid(double lower, double upper, int n_interior,
                      const std::vector<double>& forced_nodes,
                      const std::function<double(double)>& a2) {
    if (!(lower < upper) || n_interior < 1) throw ContractError("make_grid: bad arguments");
    std::vector<double> nodes;
    nodes.reserve(n_interior + 2 + forced_nodes.size());
    for (int k = 0; k <= n_interior + 1; ++k)
        nodes.push_back(lower + (upper - lower) * k / (n_interior + 1));
    for (double f : forced_nodes)
        if (f > lower && f < upper) nodes.push_back(f);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    SpatialGrid grid;
    grid.nodes = std::move(nodes);
    for (double x : grid.nodes) {
        const double v = a2(x);
        if (!(v > 0.0) || !std::isfinite(v))
            throw ContractError("make_grid: coefficient sample not strictly positive");
        grid.a2.push_back(v);
    }
    return grid;
}

namespace {

// Thomas elimination for diag/off-diagonal system; diag is strictly dominant
// here so no pivoting is needed.
std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                      std::vector<double> upper, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t k = 1; k < n; ++k) {
        if (diag[k - 1] == 0.0) throw ContractError("SingularSystem: zero pivot");
        const double m = lower[k] / diag[k - 1];
        diag[k] -= m * upper[k - 1];
        rhs[k] -= m * rhs[k - 1];
    }
    if (diag[n - 1] == 0.0) throw ContractError("SingularSystem: zero pivot");
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) x[k] = (rhs[k] - upper[k] * x[k + 1]) / diag[k];
    return x;
}

} // namespace

std::vector<double> solve_backward_step(const SpatialGrid& grid, double tstar,
                                        const std::vector<double>& source) {
    const std::size_t n = grid.nodes.size();
    if (source.size() != n) throw ContractError("solve_backward_step: source size mismatch");
    if (!(tstar > 0.0)) throw ContractError("solve_backward_step: t* must be positive");
    if (n < 3) throw ContractError("solve_backward_step: grid too small");

    const std::size_t m = n - 2;  // interior unknowns
    std::vector<double> lo(m), di(m), up(m), rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double hl = grid.nodes[k + 1] - grid.nodes[k];
        const double hr = grid.nodes[k + 2] - grid.nodes[k + 1];
        const double half_a2 = 0.5 * grid.a2[k + 1];
        lo[k] = half_a2 * 2.0 / (hl * (hl + hr));
        up[k] = half_a2 * 2.0 / (hr * (hl + hr));
        di[k] = -(lo[k] + up[k]) - 1.0 / tstar;
        rhs[k] = -source[k + 1] / tstar;
    }
    const std::vector<double> interior = solve_tridiagonal(lo, di, up, rhs);
    std::vector<double> u(n, 0.0);
    std::copy(interior.begin(), interior.end(), u.begin() + 1);
    return u;
}

double PDDESolution::value_at(std::size_t step, double x) const {
    const std::vector<double>& v = values.at(step);
    const std::vector<double>& nodes = grid.nodes;
    if (!(x >= nodes.front() && x <= nodes.back()))
        throw DataError("OutOfDomain: point outside the grid");
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    std::size_t j = static_cast<std::size_t>(it - nodes.begin());
    j = std::min(std::max<std::size_t>(j, 1), nodes.size() - 1);
    const double t = (x - nodes[j - 1]) / (nodes[j] - nodes[j - 1]);
    return v[j - 1] * (1.0 - t) + v[j] * t;
}

PDDESolution propagate_european(double lower, double upper, int n_interior,
                                const std::function<double(double)>& payoff,
                                const std::vector<PDDEStep>& schedule) {
    if (schedule.empty()) throw ContractError("propagate_european: empty schedule");

    // One shared node set: union of uniform nodes and every step's knots.
    std::vector<double> forced;
    for (const PDDEStep& s : schedule)
        forced.insert(forced.end(), s.forced_nodes.begin(), s.forced_nodes.end());
    const SpatialGrid base = make_grid(lower, upper, n_interior, forced, schedule[0].a2);

    const double pl = payoff(lower), pu = payoff(upper);
    auto affine = [&](double x) { return pl + (pu - pl) * (x - lower) / (upper - lower); };

    std::vector<double> psi(base.nodes.size());
    for (std::size_t k = 0; k < base.nodes.size(); ++k)
        psi[k] = payoff(base.nodes[k]) - affine(base.nodes[k]);

    PDDESolution sol;
    sol.grid = base;
    for (const PDDEStep& step : schedule) {
        SpatialGrid grid = base;
        for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
            const double v = step.a2(grid.nodes[k]);
            if (!(v > 0.0) || !std::isfinite(v))
                throw ContractError("propagate_european: coefficient not strictly positive");
            grid.a2[k] = v;
        }
        psi = solve_backward_step(grid, step.tstar, psi);
        std::vector<double> u(psi.size());
        for (std::size_t k = 0; k < u.size(); ++k) u[k] = psi[k] + affine(base.nodes[k]);
        sol.values.push_back(std::move(u));
    }
    return sol;
}

std::vector<double> dupire_forward_step(const SpatialGrid& grid, double tstar, double spot,
                                        const std::vector<double>& prev) {
    const std::size_t n = grid.nodes.size();
    if (prev.size() != n) throw ContractError("dupire_forward_step: size mismatch");
    const double lower = grid.lower(), upper = grid.upper();
    auto affine = [&](double k) { return (spot - lower) * (upper - k) / (upper - lower); };

    std::vector<double> source(n);
    for (std::size_t k = 0; k < n; ++k) source[k] = prev[k] - affine(grid.nodes[k]);
    std::vector<double> psi = solve_backward_step(grid, tstar, source);
    for (std::size_t k = 0; k < n; ++k) psi[k] += affine(grid.nodes[k]);
    return psi;
}

} // namespace lvg
