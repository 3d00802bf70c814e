#include "lvg/surface.hpp"

#include <algorithm>
#include <cmath>

namespace lvg {

double PiecewiseConstant::at(double x) const {
    if (knots.size() < 2 || values.size() != knots.size() - 1)
        throw ContractError("PiecewiseConstant: malformed");
    if (!(x >= knots.front() && x <= knots.back()))
        throw DataError("OutOfDomain: point outside the coefficient's domain");
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    std::size_t j = static_cast<std::size_t>(it - knots.begin());
    j = (j == 0) ? 0 : j - 1;
    return values[std::min(j, values.size() - 1)];
}

double NonHomLVGModel::tstar(std::size_t m) const {
    if (m >= maturities.size()) throw ContractError("tstar: maturity index out of range");
    return maturities[m] - (m == 0 ? 0.0 : maturities[m - 1]);
}

double NonHomLVGModel::call_price(std::size_t m, double strike) const {
    if (m >= slices.size()) throw ContractError("call_price: maturity index out of range");
    for (std::size_t idx = m + 1; idx-- > 0;) {
        const LVGSlice& s = slices[idx];
        if (strike >= s.lower() && strike <= s.upper()) return s.call_price(strike);
    }
    return std::max(spot - strike, 0.0);
}

double local_variance(const NonHomLVGModel& model, std::size_t m, double strike) {
    const LVGSlice& s = model.slices.at(m);
    if (!(strike > s.lower() && strike < s.upper()))
        throw DataError("OutOfDomain: strike outside the maturity's bounds");
    const double prev =
        (m == 0) ? std::max(model.spot - strike, 0.0) : model.call_price(m - 1, strike);
    const double spread = s.call_price(strike) - prev;
    const double density = s.density(strike);
    const double a2 = 2.0 / model.tstar(m) * spread / density;
    if (!(a2 > 0.0) || !std::isfinite(a2))
        throw ContractError("local_variance: coefficient not strictly positive");
    return a2;
}

std::function<double(double)> single_smile_calibration(
    std::function<double(double)> price, std::function<double(double)> second_derivative,
    double spot, double tau_star) {
    if (!(tau_star > 0.0)) throw DataError("single_smile_calibration: tau* must be positive");
    return [=](double strike) {
        const double dd = second_derivative(strike);
        if (!(dd > 0.0)) throw DataError("DegenerateDensity: non-positive second derivative");
        const double tv = price(strike) - std::max(spot - strike, 0.0);
        return 2.0 / tau_star * tv / dd;
    };
}

PiecewiseConstant coarsen_coefficient(const PiecewiseConstant& a2,
                                      const std::vector<double>& bin_edges) {
    if (bin_edges.size() < 2 || bin_edges.front() != a2.knots.front() ||
        bin_edges.back() != a2.knots.back())
        throw ContractError("coarsen_coefficient: bin edges must span the domain");
    for (std::size_t k = 0; k + 1 < bin_edges.size(); ++k)
        if (!(bin_edges[k] < bin_edges[k + 1]))
            throw ContractError("coarsen_coefficient: bin edges not increasing");

    PiecewiseConstant out;
    out.knots = bin_edges;
    for (std::size_t k = 0; k + 1 < bin_edges.size(); ++k) {
        const double lo = bin_edges[k], hi = bin_edges[k + 1];
        double integral = 0.0;  // of 1/a^2 over the bin
        for (std::size_t j = 0; j + 1 < a2.knots.size(); ++j) {
            const double a = std::max(lo, a2.knots[j]);
            const double b = std::min(hi, a2.knots[j + 1]);
            if (b > a) integral += (b - a) / a2.values[j];
        }
        out.values.push_back((hi - lo) / integral);
    }
    return out;
}

LVGSlice coarsen_slice(const LVGSlice& slice, int bins) {
    if (bins < 1) throw DataError("coarsen_slice: need at least one bin");
    PiecewiseConstant a2;
    a2.knots = slice.knots();
    for (double s : slice.sigmas()) a2.values.push_back(s * s);

    std::vector<double> edges;
    for (int k = 0; k <= bins; ++k)
        edges.push_back(slice.lower() + (slice.upper() - slice.lower()) * k / bins);
    edges.push_back(slice.spot());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const PiecewiseConstant coarse = coarsen_coefficient(a2, edges);
    std::vector<double> interior(coarse.knots.begin() + 1, coarse.knots.end() - 1);
    std::vector<double> sigmas;
    for (double v : coarse.values) sigmas.push_back(std::sqrt(v));
    return LVGSlice(slice.z(), slice.spot(), slice.lower(), slice.upper(), interior, sigmas);
}

NonHomLVGModel assemble_model(std::vector<LVGSlice> slices, std::vector<double> maturities,
                              double spot) {
    if (slices.empty() || slices.size() != maturities.size())
        throw DataError("assemble_model: need one maturity per slice");
    for (std::size_t m = 0; m < maturities.size(); ++m) {
        const double prev = (m == 0) ? 0.0 : maturities[m - 1];
        if (!(maturities[m] > prev)) throw DataError("NestingViolation: maturities not increasing");
        if (slices[m].z() != slices[0].z() || slices[m].spot() != spot)
            throw DataError("NestingViolation: slices disagree on z or spot");
        if (m > 0 && (slices[m].lower() > slices[m - 1].lower() ||
                      slices[m].upper() < slices[m - 1].upper()))
            throw DataError("NestingViolation: bounds not nested across maturities");
    }
    NonHomLVGModel model;
    model.z = slices[0].z();
    model.spot = spot;
    model.maturities = std::move(maturities);
    model.slices = std::move(slices);
    for (std::size_t m = 0; m < model.slices.size(); ++m) {
        const LVGSlice& s = model.slices[m];
        for (int k = 0; k < 200; ++k)
            local_variance(model, m, s.lower() + (s.upper() - s.lower()) * (k + 0.5) / 200.0);
    }
    return model;
}

} // namespace lvg
