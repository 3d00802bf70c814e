#include "lvg/gamma_mc.hpp"

#include <algorithm>
#include <cmath>

namespace lvg {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct Accumulator {
    double sum = 0.0, sum_sq = 0.0;
    long n = 0;
    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    double mean() const { return sum / n; }
    double std_error() const {
        const double var = std::max(sum_sq / n - mean() * mean(), 0.0);
        return std::sqrt(var / n);
    }
};

McEstimate simulate(const std::vector<double>& knots, const std::vector<double>& sigmas,
                    double spot, double strike, double tstar, long n_paths, int n_steps,
                    std::uint64_t seed) {
    if (n_paths < 100) throw DataError("simulate: need at least 100 paths");
    if (n_steps < 1) throw DataError("simulate: need at least one step");
    const double lower = knots.front(), upper = knots.back();
    const GammaClock clock = GammaClock::unbiased(tstar);

    auto coef = [&](double d) {
        auto it = std::upper_bound(knots.begin(), knots.end(), d);
        std::size_t j = static_cast<std::size_t>(it - knots.begin());
        j = (j == 0) ? 0 : j - 1;
        return sigmas[std::min(j, sigmas.size() - 1)];
    };

    Accumulator payoff, terminal;
    for (long path = 0; path < n_paths; ++path) {
        std::mt19937_64 rng = path_rng(seed, static_cast<std::uint64_t>(path));
        const double tau = sample_gamma(tstar, clock, rng);
        const double h = tau / n_steps;
        const double sqrt_h = std::sqrt(h);
        std::normal_distribution<double> normal(0.0, 1.0);

        double d = spot;
        for (int step = 0; step < n_steps; ++step) {
            d += coef(d) * sqrt_h * normal(rng);
            if (d <= lower) {
                d = lower;
                break;
            }
            if (d >= upper) {
                d = upper;
                break;
            }
        }
        payoff.add(std::max(d - strike, 0.0));
        terminal.add(d);
    }

    McEstimate est;
    est.price = payoff.mean();
    est.std_error = payoff.std_error();
    est.n_paths = n_paths;
    est.n_steps = n_steps;
    est.mean_underlying = terminal.mean();
    est.mean_underlying_se = terminal.std_error();
    return est;
}

} // namespace

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path) {
    std::uint64_t state = seed ^ (0xD1B54A32D192ED03ull * (path + 1));
    const std::uint64_t a = splitmix64(state);
    const std::uint64_t b = splitmix64(state);
    return std::mt19937_64(a ^ (b << 1));
}

double sample_gamma(double t, const GammaClock& clock, std::mt19937_64& rng) {
    if (!(t > 0.0) || !(clock.tstar > 0.0) || !(clock.alpha > 0.0))
        throw DataError("sample_gamma: parameters must be positive");
    std::gamma_distribution<double> dist(t / clock.tstar, 1.0 / clock.alpha);
    return dist(rng);
}

McEstimate simulate_slice_call(const LVGSlice& slice, double strike, long n_paths, int n_steps,
                               std::uint64_t seed) {
    return simulate(slice.knots(), slice.sigmas(), slice.spot(), strike, slice.tstar(), n_paths,
                    n_steps, seed);
}

McEstimate simulate_nonhom_first_interval(const NonHomLVGModel& model, double maturity,
                                          double strike, long n_paths, int n_steps,
                                          std::uint64_t seed) {
    const double t1 = model.maturities.at(0);
    if (std::abs(maturity - t1) > 1e-12 * std::max(1.0, t1))
        throw DataError("UnsupportedMaturity: only the first maturity interval is simulated");
    const LVGSlice& s = model.slices.at(0);
    // On (0, T_1] the model is homogeneous with a^2 = (2 / (T_1 z^2)) sigma^2.
    const double scale = std::sqrt(2.0 / (t1 * model.z * model.z));
    std::vector<double> sigmas;
    for (double sg : s.sigmas()) sigmas.push_back(sg * scale);
    return simulate(s.knots(), sigmas, s.spot(), strike, t1, n_paths, n_steps, seed);
}

} // namespace lvg
