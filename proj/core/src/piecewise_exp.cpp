#include "lvg/piecewise_exp.hpp"

#include <algorithm>
#include <cmath>

namespace lvg {

namespace {

void check_partition(const std::vector<double>& knots, const std::vector<double>& sigmas) {
    if (knots.size() < 2 || sigmas.size() != knots.size() - 1)
        throw ContractError("piecewise partition: size mismatch");
    for (std::size_t j = 0; j + 1 < knots.size(); ++j)
        if (!(knots[j] < knots[j + 1]))
            throw ContractError("piecewise partition: knots not strictly increasing");
    for (double s : sigmas)
        if (!(s > 0.0)) throw ContractError("piecewise partition: sigma must be positive");
}

// Index j with knots[j] <= strike < knots[j+1]; the last segment is closed.
std::size_t closed_left_segment(const std::vector<double>& knots, double strike) {
    auto it = std::upper_bound(knots.begin(), knots.end(), strike);
    if (it == knots.begin() || (it == knots.end() && strike > knots.back()))
        throw DataError("OutOfDomain: strike outside the branch interval");
    std::size_t j = static_cast<std::size_t>(it - knots.begin()) - 1;
    return std::min(j, knots.size() - 2);
}

} // namespace

ValueSlope propagate_segment(ValueSlope at_left, double sigma, double z, double width) {
    const double u = z * width / sigma;
    const double ch = std::cosh(u);
    const double sh = std::sinh(u);
    // Skip zero terms so that cosh/sinh overflow to +inf stays sign-correct
    // (0 * inf would poison the state with NaN).
    const double av = at_left.value, bs = at_left.slope;
    const double value = (av == 0.0 ? 0.0 : av * ch) + (bs == 0.0 ? 0.0 : sigma * bs / z * sh);
    const double slope = (av == 0.0 ? 0.0 : av * z / sigma * sh) + (bs == 0.0 ? 0.0 : bs * ch);
    return {value, slope};
}

ValueSlope propagate_up(ValueSlope at_knot, double sigma_lo, double sigma_hi) {
    if (!(sigma_lo > 0.0) || !(sigma_hi > 0.0))
        throw ContractError("propagate_up: sigma must be positive");
    return at_knot;  // value and slope are both continuous across the knot
}

ValueSlope propagate_down(ValueSlope at_knot, double sigma_hi, double sigma_lo) {
    if (!(sigma_lo > 0.0) || !(sigma_hi > 0.0))
        throw ContractError("propagate_down: sigma must be positive");
    return at_knot;
}

ExpBranch::ExpBranch(std::vector<double> knots, std::vector<double> sigmas, ValueSlope at_left,
                     double z)
    : knots_(std::move(knots)), sigmas_(std::move(sigmas)), z_(z) {
    check_partition(knots_, sigmas_);
    if (!(z_ > 0.0)) throw ContractError("ExpBranch: z must be positive");
    states_.resize(sigmas_.size());
    states_[0] = at_left;
    for (std::size_t j = 0; j + 1 < sigmas_.size(); ++j) {
        const ValueSlope end =
            propagate_segment(states_[j], sigmas_[j], z_, knots_[j + 1] - knots_[j]);
        states_[j + 1] = propagate_up(end, sigmas_[j], sigmas_[j + 1]);
    }
}

std::size_t ExpBranch::segment_index(double strike) const {
    return closed_left_segment(knots_, strike);
}

ValueSlope ExpBranch::eval(double strike) const {
    const std::size_t j = segment_index(strike);
    return propagate_segment(states_[j], sigmas_[j], z_, strike - knots_[j]);
}

double ExpBranch::sigma_at(double strike) const { return sigmas_[segment_index(strike)]; }

std::pair<double, double> solve_lambda_pair(double v1, double d1, double v2, double d2) {
    if (!(v1 > 0.0) || !(v2 > 0.0) || !(d1 > 0.0) || !(d2 < 0.0))
        throw ContractError("DegenerateBranch: unit branch values violate monotonicity");
    const double lambda1 = v2 / (d1 * v2 - d2 * v1);
    const double lambda2 = lambda1 * v1 / v2;
    return {lambda1, lambda2};
}

LVGSlice::LVGSlice(double z, double spot, double lower, double upper,
                   std::vector<double> interior_knots, std::vector<double> sigmas)
    : z_(z),
      spot_(spot),
      lower_(lower),
      upper_(upper),
      interior_knots_(std::move(interior_knots)),
      sigmas_(std::move(sigmas)) {
    if (!(lower_ < spot_ && spot_ < upper_))
        throw DataError("LVGSlice: spot must lie strictly inside (L, U)");
    for (double k : interior_knots_)
        if (!(lower_ < k && k < upper_))
            throw DataError("LVGSlice: interior knot outside (L, U)");

    full_knots_.reserve(interior_knots_.size() + 2);
    full_knots_.push_back(lower_);
    full_knots_.insert(full_knots_.end(), interior_knots_.begin(), interior_knots_.end());
    full_knots_.push_back(upper_);
    const std::vector<double>& full = full_knots_;
    check_partition(full, sigmas_);

    // Left unit branch on [L, x].
    std::vector<double> lk, ls;
    for (std::size_t j = 0; j + 1 < full.size(); ++j) {
        if (full[j] >= spot_) break;
        lk.push_back(full[j]);
        ls.push_back(sigmas_[j]);
    }
    lk.push_back(spot_);
    left_ = ExpBranch(lk, ls, {0.0, 2.0 * z_ / ls.front()}, z_);

    // Right unit branch, built in reflected coordinates K' = L + U - K.
    std::vector<double> rk, rs;
    const double refl = lower_ + upper_;
    for (std::size_t j = full.size() - 1; j > 0; --j) {
        if (full[j] <= spot_) break;
        rk.push_back(refl - full[j]);
        rs.push_back(sigmas_[j - 1]);
    }
    rk.push_back(refl - spot_);
    right_reflected_ = ExpBranch(rk, rs, {0.0, 2.0 * z_ / rs.front()}, z_);

    const ValueSlope l = left_.eval(spot_);
    const ValueSlope r = right_reflected_.eval(refl - spot_);
    std::tie(lambda1_, lambda2_) = solve_lambda_pair(l.value, l.slope, r.value, -r.slope);
}

ValueSlope LVGSlice::time_value_state(double strike) const {
    if (!(strike >= lower_ && strike <= upper_))
        throw DataError("OutOfDomain: strike outside [L, U]");
    if (strike <= spot_) {
        const ValueSlope s = left_.eval(strike);
        return {lambda1_ * s.value, lambda1_ * s.slope};
    }
    const ValueSlope s = right_reflected_.eval(lower_ + upper_ - strike);
    return {lambda2_ * s.value, -lambda2_ * s.slope};
}

double LVGSlice::time_value(double strike) const { return time_value_state(strike).value; }

double LVGSlice::right_derivative(double strike) const {
    if (strike < spot_) return time_value_state(strike).slope;
    const ValueSlope s = right_reflected_.eval(lower_ + upper_ - strike);
    return -lambda2_ * s.slope;
}

double LVGSlice::call_price(double strike) const {
    return time_value(strike) + std::max(spot_ - strike, 0.0);
}

double LVGSlice::sigma_at(double strike) const {
    if (!(strike >= lower_ && strike <= upper_))
        throw DataError("OutOfDomain: strike outside [L, U]");
    return sigmas_[closed_left_segment(full_knots_, strike)];
}

double LVGSlice::density(double strike) const {
    const double s = sigma_at(strike);
    return z_ * z_ * time_value(strike) / (s * s);
}

} // namespace lvg
