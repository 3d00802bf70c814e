#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lvg/errors.hpp"

namespace lvg {

inline constexpr double kWorkingDaysPerYear = 252.0;

struct Quote {
    double strike = 0.0;
    double bid = 0.0;
    double ask = 0.0;
    double volume = 0.0;
};

struct MaturityQuotes {
    int days = 0;       // working days to expiry
    double tau = 0.0;   // year fraction, days / 252
    std::vector<Quote> quotes;  // strictly increasing strikes
};

struct QuoteGrid {
    double spot = 0.0;
    std::vector<MaturityQuotes> maturities;  // strictly increasing in days
};

// Piecewise-flat-left term structure: rate(t) is the rate of the first tenor
// >= t. A default-constructed curve is identically zero everywhere.
class Curve {
public:
    Curve() = default;
    explicit Curve(std::vector<std::pair<double, double>> tenor_rates);

    // CSV with header `tenor_years,rate`.
    static Curve parse(const std::string& csv_text);

    double rate(double tenor) const;  // DataError("CurveUndefined") past the last tenor
    bool is_zero() const { return points_.empty(); }

private:
    std::vector<std::pair<double, double>> points_;
};

// CSV with header `maturity_days,strike,bid,ask,volume`.
QuoteGrid parse_quotes(const std::string& csv_text, double spot);

// Move prices and strikes into forward-measure units under deterministic
// rate r and dividend yield q: price -> price * e^{rT}, strike -> strike *
// e^{(r-q)T}. The spot is left as the underlying level.
QuoteGrid discount_adjust(const QuoteGrid& grid, const Curve& rates, const Curve& dividends);

struct CheckReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Flags strikes that appear at a later maturity, are not quoted at an
// earlier one, and fall strictly inside the earlier maturity's strike range.
CheckReport check_strike_structure(const QuoteGrid& grid);

struct BoundsPolicy {
    enum class Kind { Fixed, Widen } kind = Kind::Widen;
    double lower = 0.0, upper = 0.0;  // Fixed
    double factor = 1.1;              // Widen: L = K_min*(2-f), U = K_max*f

    static BoundsPolicy fixed(double lower, double upper);
    static BoundsPolicy widen(double factor);
};

// Per-maturity (L_i, U_i) satisfying the nesting and outer-strike
// constraints; throws DataError("InfeasibleBounds") when impossible.
std::vector<std::pair<double, double>> choose_bounds(const QuoteGrid& grid,
                                                     const BoundsPolicy& policy);

struct MaturityPrices {
    int days = 0;
    double tau = 0.0;
    double lower = 0.0, upper = 0.0;
    std::vector<double> strikes;  // interior strikes only, strictly increasing
    std::vector<double> prices;   // exact call prices
};

struct AdmissiblePrices {
    double spot = 0.0;
    double margin = 0.0;  // slack achieved on the strict inequalities
    std::vector<MaturityPrices> maturities;
};

// Verifies the strict-admissibility inequalities on the augmented graph
// (L, x-L), (K_j, C_j), ..., (U, 0) with strictness margin `margin`.
CheckReport check_strict_admissibility(const AdmissiblePrices& prices, double margin = 1e-12);

} // namespace lvg
