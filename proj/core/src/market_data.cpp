#include "lvg/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace lvg {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    return out;
}

double parse_number(const std::string& field, int line_no) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size())
        throw DataError("ParseError: line " + std::to_string(line_no) + ": bad number '" +
                        field + "'");
    return v;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

} // namespace

Curve::Curve(std::vector<std::pair<double, double>> tenor_rates)
    : points_(std::move(tenor_rates)) {
    std::sort(points_.begin(), points_.end());
    for (std::size_t k = 0; k + 1 < points_.size(); ++k)
        if (points_[k].first == points_[k + 1].first)
            throw DataError("Curve: duplicate tenor");
}

Curve Curve::parse(const std::string& csv_text) {
    std::stringstream ss(csv_text);
    std::string line;
    int line_no = 0;
    std::vector<std::pair<double, double>> pts;
    while (std::getline(ss, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "tenor_years,rate")
                throw DataError("ParseError: line 1: expected header 'tenor_years,rate'");
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 2)
            throw DataError("ParseError: line " + std::to_string(line_no) + ": expected 2 fields");
        pts.emplace_back(parse_number(f[0], line_no), parse_number(f[1], line_no));
    }
    return Curve(std::move(pts));
}

double Curve::rate(double tenor) const {
    if (points_.empty()) return 0.0;
    auto it = std::lower_bound(points_.begin(), points_.end(), tenor,
                               [](const auto& p, double t) { return p.first < t; });
    if (it == points_.end())
        throw DataError(fmt("CurveUndefined: tenor %.12g beyond last curve point", tenor));
    return it->second;
}

QuoteGrid parse_quotes(const std::string& csv_text, double spot) {
    std::stringstream ss(csv_text);
    std::string line;
    int line_no = 0;
    QuoteGrid grid;
    grid.spot = spot;
    while (std::getline(ss, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "maturity_days,strike,bid,ask,volume")
                throw DataError(
                    "ParseError: line 1: expected header 'maturity_days,strike,bid,ask,volume'");
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 5)
            throw DataError("ParseError: line " + std::to_string(line_no) + ": expected 5 fields");
        const double days_d = parse_number(f[0], line_no);
        const int days = static_cast<int>(days_d);
        if (days_d != days || days <= 0)
            throw DataError("ParseError: line " + std::to_string(line_no) +
                            ": maturity_days must be a positive integer");
        Quote q;
        q.strike = parse_number(f[1], line_no);
        q.bid = parse_number(f[2], line_no);
        q.ask = parse_number(f[3], line_no);
        q.volume = parse_number(f[4], line_no);
        if (q.bid < 0.0 || q.volume < 0.0)
            throw DataError("ParseError: line " + std::to_string(line_no) +
                            ": negative bid or volume");
        if (q.ask < q.bid)
            throw DataError(fmt("NegativeSpread: strike %.12g, bid %.12g > ask %.12g", q.strike,
                                q.bid, q.ask));
        auto it = std::find_if(grid.maturities.begin(), grid.maturities.end(),
                               [&](const MaturityQuotes& m) { return m.days == days; });
        if (it == grid.maturities.end()) {
            grid.maturities.push_back({days, days / kWorkingDaysPerYear, {}});
            it = grid.maturities.end() - 1;
        }
        for (const Quote& other : it->quotes)
            if (other.strike == q.strike)
                throw DataError(fmt("DuplicateStrike: maturity %g days, strike %.12g",
                                    static_cast<double>(days), q.strike));
        it->quotes.push_back(q);
    }
    std::sort(grid.maturities.begin(), grid.maturities.end(),
              [](const MaturityQuotes& a, const MaturityQuotes& b) { return a.days < b.days; });
    for (MaturityQuotes& m : grid.maturities)
        std::sort(m.quotes.begin(), m.quotes.end(),
                  [](const Quote& a, const Quote& b) { return a.strike < b.strike; });
    return grid;
}

QuoteGrid discount_adjust(const QuoteGrid& grid, const Curve& rates, const Curve& dividends) {
    QuoteGrid out = grid;
    for (MaturityQuotes& m : out.maturities) {
        const double r = rates.rate(m.tau);
        const double q = dividends.rate(m.tau);
        const double price_scale = std::exp(r * m.tau);
        const double strike_scale = std::exp((r - q) * m.tau);
        for (Quote& quote : m.quotes) {
            quote.strike *= strike_scale;
            quote.bid *= price_scale;
            quote.ask *= price_scale;
        }
    }
    return out;
}

CheckReport check_strike_structure(const QuoteGrid& grid) {
    CheckReport report;
    for (std::size_t i = 0; i < grid.maturities.size(); ++i) {
        const MaturityQuotes& early = grid.maturities[i];
        if (early.quotes.empty()) continue;
        const double lo = early.quotes.front().strike;
        const double hi = early.quotes.back().strike;
        for (std::size_t l = i + 1; l < grid.maturities.size(); ++l) {
            for (const Quote& q : grid.maturities[l].quotes) {
                if (!(q.strike > lo && q.strike < hi)) continue;
                const bool shared = std::any_of(
                    early.quotes.begin(), early.quotes.end(),
                    [&](const Quote& e) { return e.strike == q.strike; });
                if (!shared)
                    report.violations.push_back(
                        fmt("strike %.12g at maturity %g days is interior to the %g-day "
                            "strike range but not quoted there",
                            q.strike, static_cast<double>(grid.maturities[l].days),
                            static_cast<double>(early.days)));
            }
        }
    }
    return report;
}

BoundsPolicy BoundsPolicy::fixed(double lower, double upper) {
    BoundsPolicy p;
    p.kind = Kind::Fixed;
    p.lower = lower;
    p.upper = upper;
    return p;
}

BoundsPolicy BoundsPolicy::widen(double factor) {
    if (!(factor > 1.0)) throw DataError("InfeasibleBounds: widen factor must exceed 1");
    BoundsPolicy p;
    p.kind = Kind::Widen;
    p.factor = factor;
    return p;
}

std::vector<std::pair<double, double>> choose_bounds(const QuoteGrid& grid,
                                                     const BoundsPolicy& policy) {
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = grid.maturities.size();
    std::vector<std::pair<double, double>> bounds(n);
    for (std::size_t i = 0; i < n; ++i) {
        const MaturityQuotes& m = grid.maturities[i];
        if (m.quotes.empty()) throw DataError("InfeasibleBounds: maturity with no quotes");
        const double k_lo = m.quotes.front().strike;
        const double k_hi = m.quotes.back().strike;

        // Later-maturity strikes outside this maturity's strike range pin the
        // widest interval the underlying may occupy before this expiry.
        double excl_lo = -inf, excl_hi = inf;
        for (std::size_t l = i + 1; l < n; ++l)
            for (const Quote& q : grid.maturities[l].quotes) {
                if (q.strike < k_lo) excl_lo = std::max(excl_lo, q.strike);
                if (q.strike > k_hi) excl_hi = std::min(excl_hi, q.strike);
            }

        double lower, upper;
        if (policy.kind == BoundsPolicy::Kind::Fixed) {
            lower = policy.lower;
            upper = policy.upper;
        } else {
            lower = k_lo * (2.0 - policy.factor);
            upper = k_hi * policy.factor;
            if (i > 0) {
                lower = std::min(lower, bounds[i - 1].first);
                upper = std::max(upper, bounds[i - 1].second);
            }
            lower = std::max(lower, excl_lo);
            upper = std::min(upper, excl_hi);
        }

        if (!(lower < k_lo) || !(upper > k_hi))
            throw DataError(fmt("InfeasibleBounds: maturity %g days, bounds (%.12g, %.12g) do "
                                "not enclose the strike range",
                                static_cast<double>(m.days), lower, upper));
        if (!(grid.spot > lower && grid.spot < upper))
            throw DataError(fmt("InfeasibleBounds: spot %.12g outside (%.12g, %.12g)", grid.spot,
                                lower, upper));
        if (lower < excl_lo || upper > excl_hi)
            throw DataError(fmt("InfeasibleBounds: maturity %g days, bounds exceed the "
                                "later-strike exclusion interval",
                                static_cast<double>(m.days)));
        if (i > 0 && (lower > bounds[i - 1].first || upper < bounds[i - 1].second))
            throw DataError(fmt("InfeasibleBounds: maturity %g days, bounds not nested",
                                static_cast<double>(m.days)));
        bounds[i] = {lower, upper};
    }
    return bounds;
}

CheckReport check_strict_admissibility(const AdmissiblePrices& prices, double margin) {
    CheckReport report;
    auto flag = [&](const std::string& s) { report.violations.push_back(s); };

    for (std::size_t i = 0; i < prices.maturities.size(); ++i) {
        const MaturityPrices& m = prices.maturities[i];
        const std::string tag = "maturity " + std::to_string(m.days) + " days: ";
        if (!(m.lower < prices.spot && prices.spot < m.upper))
            flag(tag + "spot outside (L, U)");
        if (i > 0) {
            const MaturityPrices& p = prices.maturities[i - 1];
            if (m.lower > p.lower || m.upper < p.upper) flag(tag + "bounds not nested");
        }

        // Augmented graph (L, x-L), (K_j, C_j), ..., (U, 0).
        std::vector<double> k{m.lower}, c{prices.spot - m.lower};
        for (std::size_t j = 0; j < m.strikes.size(); ++j) {
            if (!(m.strikes[j] > m.lower && m.strikes[j] < m.upper)) {
                flag(tag + fmt("strike %.12g outside (L, U)", m.strikes[j]));
                continue;
            }
            k.push_back(m.strikes[j]);
            c.push_back(m.prices[j]);
        }
        k.push_back(m.upper);
        c.push_back(0.0);

        for (std::size_t j = 0; j + 1 < k.size(); ++j) {
            if (!(k[j] < k[j + 1])) flag(tag + "strikes not strictly increasing");
            if (!(c[j] - c[j + 1] > margin))
                flag(tag + fmt("prices not strictly decreasing between %.12g and %.12g", k[j],
                               k[j + 1]));
        }
        for (std::size_t j = 1; j + 1 < k.size(); ++j) {
            const double theta = (k[j + 1] - k[j]) / (k[j + 1] - k[j - 1]);
            const double hull = theta * c[j - 1] + (1.0 - theta) * c[j + 1];
            if (!(hull - c[j] > margin))
                flag(tag + fmt("convexity/collinearity failure at strike %.12g", k[j]));
        }
        for (std::size_t j = 0; j < m.strikes.size(); ++j) {
            const double intrinsic = std::max(prices.spot - m.strikes[j], 0.0);
            if (!(m.prices[j] - intrinsic > margin))
                flag(tag + fmt("price at strike %.12g not above intrinsic", m.strikes[j]));
        }

        if (i > 0) {
            const MaturityPrices& p = prices.maturities[i - 1];
            for (std::size_t j = 0; j < m.strikes.size(); ++j) {
                if (!(m.strikes[j] > p.lower && m.strikes[j] < p.upper)) continue;
                for (std::size_t jj = 0; jj < p.strikes.size(); ++jj)
                    if (p.strikes[jj] == m.strikes[j] && !(m.prices[j] - p.prices[jj] > margin))
                        flag(tag + fmt("calendar monotonicity failure at strike %.12g",
                                       m.strikes[j]));
            }
        }
    }
    return report;
}

} // namespace lvg
