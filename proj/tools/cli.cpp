#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lvg/feasibility.hpp"
#include "lvg/gamma_mc.hpp"
#include "lvg/market_data.hpp"
#include "lvg/model_io.hpp"
#include "lvg/numerics.hpp"
#include "lvg/pdde.hpp"
#include "lvg/smile_interp.hpp"
#include "lvg/surface.hpp"

namespace lvg::cli {

namespace {

std::string num12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

BoundsPolicy parse_bounds(const std::string& text) {
    if (text.rfind("fixed:", 0) == 0) {
        const std::string body = text.substr(6);
        const auto comma = body.find(',');
        if (comma == std::string::npos)
            throw DataError("--bounds fixed:L,U needs two numbers");
        return BoundsPolicy::fixed(std::stod(body.substr(0, comma)),
                                   std::stod(body.substr(comma + 1)));
    }
    if (text.rfind("widen:", 0) == 0) return BoundsPolicy::widen(std::stod(text.substr(6)));
    throw DataError("--bounds expects fixed:L,U or widen:F");
}

struct Options {
    std::string quotes, rates, dividends, model, out, payoff, bounds = "widen:1.5";
    double spot = 0.0;
    double z = 0.0, tstar = 0.0;  // 0 = unset
    double d1 = 0.5, d2 = 0.5, d3 = 0.5, d4 = 0.5;
    double eps = 0.0;  // 0 = default 1e-4 * spot
    double strike = 0.0;
    int grid_n = 2000;
    int bins = 10;
    long paths = 100000;
    int steps = 2000;
    std::uint64_t seed = 12345;
};

QuoteGrid load_quotes(const Options& o) {
    if (o.quotes.empty()) throw DataError("--quotes is required");
    QuoteGrid grid = parse_quotes(read_file(o.quotes), o.spot);
    const Curve rates = o.rates.empty() ? Curve() : Curve::parse(read_file(o.rates));
    const Curve divs = o.dividends.empty() ? Curve() : Curve::parse(read_file(o.dividends));
    return discount_adjust(grid, rates, divs);
}

double default_eps(const Options& o) { return o.eps > 0.0 ? o.eps : 1e-4 * o.spot; }

AdmissiblePrices load_prices(const Options& o) {
    const std::string text = read_file(o.quotes);
    if (text.rfind("maturity_days,strike,price", 0) == 0) return prices_from_csv(text, o.spot);
    Options oq = o;
    const QuoteGrid grid = [&] {
        QuoteGrid g = parse_quotes(text, o.spot);
        const Curve rates = o.rates.empty() ? Curve() : Curve::parse(read_file(o.rates));
        const Curve divs = o.dividends.empty() ? Curve() : Curve::parse(read_file(o.dividends));
        return discount_adjust(g, rates, divs);
    }();
    const auto bounds = choose_bounds(grid, parse_bounds(o.bounds));
    const double eps = default_eps(o);
    return solve_feasible_prices(complete_strike_grid(grid, bounds, eps), eps);
}

double resolve_z(const Options& o, const AdmissiblePrices& prices) {
    if (o.z > 0.0) return o.z;
    const double tstar = o.tstar > 0.0 ? o.tstar : prices.maturities.at(0).tau;
    return std::sqrt(2.0 / tstar);
}

NonHomLVGModel calibrate(const Options& o, const AdmissiblePrices& prices) {
    const Deltas d{o.d1, o.d2, o.d3, o.d4};
    std::vector<LVGSlice> slices = interpolate_surface(prices, d, resolve_z(o, prices));
    std::vector<double> mats;
    for (const MaturityPrices& m : prices.maturities) mats.push_back(m.tau);
    return assemble_model(std::move(slices), std::move(mats), prices.spot);
}

std::string knots_csv(const AdmissiblePrices& prices, const NonHomLVGModel& model) {
    std::ostringstream out;
    out << "maturity_days,segment,nu_left,nu_right,sigma\n";
    for (std::size_t i = 0; i < model.slices.size(); ++i) {
        const LVGSlice& s = model.slices[i];
        for (std::size_t j = 0; j < s.sigmas().size(); ++j)
            out << prices.maturities[i].days << ',' << j << ',' << num12(s.knots()[j]) << ','
                << num12(s.knots()[j + 1]) << ',' << num12(s.sigmas()[j]) << '\n';
    }
    return out.str();
}

int cmd_check(const Options& o) {
    const QuoteGrid grid = load_quotes(o);
    CheckReport structure = check_strike_structure(grid);
    for (const std::string& v : structure.violations) std::cout << "structure: " << v << '\n';

    const auto bounds = choose_bounds(grid, parse_bounds(o.bounds));
    AdmissiblePrices mid;
    mid.spot = grid.spot;
    for (std::size_t i = 0; i < grid.maturities.size(); ++i) {
        MaturityPrices m;
        m.days = grid.maturities[i].days;
        m.tau = grid.maturities[i].tau;
        m.lower = bounds[i].first;
        m.upper = bounds[i].second;
        for (const Quote& q : grid.maturities[i].quotes) {
            m.strikes.push_back(q.strike);
            m.prices.push_back(0.5 * (q.bid + q.ask));
        }
        mid.maturities.push_back(std::move(m));
    }
    CheckReport adm = check_strict_admissibility(mid);
    for (const std::string& v : adm.violations) std::cout << "admissibility: " << v << '\n';
    if (!structure.ok() || !adm.ok()) {
        std::cout << "check: " << structure.violations.size() + adm.violations.size()
                  << " violation(s)\n";
        return 1;
    }
    std::cout << "check: ok\n";
    return 0;
}

int cmd_feasify(const Options& o) {
    const AdmissiblePrices prices = load_prices(o);
    const std::string csv = prices_to_csv(prices);
    if (o.out.empty())
        std::cout << csv;
    else
        write_file(o.out, csv);
    return 0;
}

int cmd_calibrate(const Options& o) {
    const AdmissiblePrices prices = load_prices(o);
    const NonHomLVGModel model = calibrate(o, prices);

    double max_err = 0.0;
    for (std::size_t i = 0; i < prices.maturities.size(); ++i) {
        const MaturityPrices& m = prices.maturities[i];
        for (std::size_t j = 0; j < m.strikes.size(); ++j)
            max_err = std::max(max_err, std::abs(model.slices[i].call_price(m.strikes[j]) -
                                                 m.prices[j]));
    }
    std::cout << "repricing max abs error: " << num12(max_err) << '\n';

    if (o.out.empty()) throw DataError("--out is required for calibrate");
    write_file(o.out, model_to_json(model));
    write_file(o.out + ".knots.csv", knots_csv(prices, model));
    return 0;
}

int cmd_price(const Options& o) {
    const NonHomLVGModel model = model_from_json(read_file(o.model));
    if (o.payoff.empty()) throw DataError("--payoff is required (call:K or put:K)");
    const auto colon = o.payoff.find(':');
    if (colon == std::string::npos) throw DataError("--payoff expects call:K or put:K");
    const std::string kind = o.payoff.substr(0, colon);
    const double k = std::stod(o.payoff.substr(colon + 1));
    std::function<double(double)> payoff;
    if (kind == "call")
        payoff = [k](double s) { return std::max(s - k, 0.0); };
    else if (kind == "put")
        payoff = [k](double s) { return std::max(k - s, 0.0); };
    else
        throw DataError("--payoff expects call:K or put:K");

    const LVGSlice& first = model.slices.front();
    std::vector<PDDEStep> schedule;
    for (std::size_t m = 0; m < model.slices.size(); ++m) {
        PDDEStep step;
        step.tstar = model.tstar(m);
        const double lo = first.lower(), hi = first.upper();
        step.a2 = [&model, m, lo, hi](double strike) {
            const double nudge = 1e-9 * (hi - lo);
            return local_variance(model, m, std::clamp(strike, lo + nudge, hi - nudge));
        };
        step.forced_nodes = model.slices[m].interior_knots();
        if (m > 0)
            step.forced_nodes.insert(step.forced_nodes.end(),
                                     model.slices[m - 1].interior_knots().begin(),
                                     model.slices[m - 1].interior_knots().end());
        schedule.push_back(std::move(step));
    }
    std::vector<double> spot_node{model.spot};
    PDDESolution sol = propagate_european(first.lower(), first.upper(), o.grid_n, payoff,
                                          [&] {
                                              std::vector<PDDEStep> s = schedule;
                                              for (PDDEStep& st : s)
                                                  st.forced_nodes.push_back(model.spot);
                                              return s;
                                          }());

    std::ostringstream out;
    out << "maturity_years,price\n";
    for (std::size_t m = 0; m < model.maturities.size(); ++m)
        out << num12(model.maturities[m]) << ',' << num12(sol.value_at(m, model.spot)) << '\n';
    if (o.out.empty())
        std::cout << out.str();
    else
        write_file(o.out, out.str());
    return 0;
}

int cmd_iv(const Options& o) {
    const AdmissiblePrices prices = prices_from_csv(read_file(o.quotes), o.spot);
    std::ostringstream out;
    out << "maturity_days,strike,price,iv\n";
    for (const MaturityPrices& m : prices.maturities)
        for (std::size_t j = 0; j < m.strikes.size(); ++j)
            out << m.days << ',' << num12(m.strikes[j]) << ',' << num12(m.prices[j]) << ','
                << num12(numerics::implied_vol(m.prices[j], m.strikes[j], prices.spot, m.tau))
                << '\n';
    if (o.out.empty())
        std::cout << out.str();
    else
        write_file(o.out, out.str());
    return 0;
}

int cmd_coarsen(const Options& o) {
    const NonHomLVGModel model = model_from_json(read_file(o.model));
    std::vector<LVGSlice> slices;
    for (const LVGSlice& s : model.slices) slices.push_back(coarsen_slice(s, o.bins));
    const NonHomLVGModel out = assemble_model(std::move(slices), model.maturities, model.spot);
    if (o.out.empty()) throw DataError("--out is required for coarsen");
    write_file(o.out, model_to_json(out));
    return 0;
}

int cmd_mc_check(const Options& o) {
    const NonHomLVGModel model = model_from_json(read_file(o.model));
    const double strike = o.strike != 0.0 ? o.strike : model.spot;
    std::ostringstream out;
    out << "slice,strike,price,std_error,closed_form,abs_diff\n";
    for (std::size_t i = 0; i < model.slices.size(); ++i) {
        const LVGSlice& s = model.slices[i];
        const McEstimate est = simulate_slice_call(s, strike, o.paths, o.steps, o.seed + i);
        const double closed = s.call_price(std::clamp(strike, s.lower(), s.upper()));
        out << i << ',' << num12(strike) << ',' << num12(est.price) << ','
            << num12(est.std_error) << ',' << num12(closed) << ','
            << num12(std::abs(est.price - closed)) << '\n';
    }
    if (o.out.empty())
        std::cout << out.str();
    else
        write_file(o.out, out.str());
    return 0;
}

struct Series {
    std::vector<std::pair<double, double>> points;
};

std::string svg_panel(const std::vector<Series>& curves, double x0, double width,
                      const std::string& title) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Series& c : curves)
        for (const auto& [x, y] : c.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                            "#8c564b", "#e377c2", "#7f7f7f"};
    std::ostringstream s;
    s << "<rect x=\"" << num12(x0) << "\" y=\"20\" width=\"" << num12(width)
      << "\" height=\"440\" fill=\"none\" stroke=\"#333\"/>\n";
    s << "<text x=\"" << num12(x0 + width / 2) << "\" y=\"14\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"13\">" << title << "</text>\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        s << "<polyline fill=\"none\" stroke=\"" << colors[c % 8] << "\" points=\"";
        for (const auto& [x, y] : curves[c].points) {
            const double px = x0 + (x - xmin) / (xmax - xmin) * width;
            const double py = 460.0 - (y - ymin) / (ymax - ymin) * 440.0;
            s << num12(px) << ',' << num12(py) << ' ';
        }
        s << "\"/>\n";
    }
    return s.str();
}

int cmd_plot_data(const Options& o) {
    const NonHomLVGModel model = model_from_json(read_file(o.model));
    if (o.out.empty()) throw DataError("--out prefix is required for plot-data");

    std::ostringstream csv;
    csv << "maturity_years,strike,price,iv\n";
    std::vector<Series> price_curves, iv_curves;
    for (std::size_t m = 0; m < model.slices.size(); ++m) {
        const LVGSlice& s = model.slices[m];
        Series pc, ic;
        for (int k = 1; k < 200; ++k) {
            const double strike = s.lower() + (s.upper() - s.lower()) * k / 200.0;
            const double price = s.call_price(strike);
            double iv = std::numeric_limits<double>::quiet_NaN();
            try {
                iv = numerics::implied_vol(price, strike, model.spot, model.maturities[m]);
                ic.points.emplace_back(strike, iv);
            } catch (const DataError&) {
            }
            pc.points.emplace_back(strike, price);
            csv << num12(model.maturities[m]) << ',' << num12(strike) << ',' << num12(price)
                << ',' << num12(iv) << '\n';
        }
        price_curves.push_back(std::move(pc));
        iv_curves.push_back(std::move(ic));
    }
    write_file(o.out + ".csv", csv.str());

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1240 480\">\n";
    svg << svg_panel(price_curves, 20.0, 580.0, "call price vs strike");
    svg << svg_panel(iv_curves, 640.0, 580.0, "implied volatility vs strike");
    svg << "</svg>\n";
    write_file(o.out + ".svg", svg.str());
    return 0;
}

int run_impl(const std::vector<std::string>& args) {
    CLI::App app{"local-variance-gamma calibration toolkit"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd, bool needs_spot) {
        cmd->add_option("--quotes", o.quotes);
        cmd->add_option("--rates", o.rates);
        cmd->add_option("--dividends", o.dividends);
        cmd->add_option("--bounds", o.bounds);
        cmd->add_option("--eps", o.eps);
        auto* spot = cmd->add_option("--spot", o.spot);
        if (needs_spot) spot->required();
    };
    auto add_calib = [&](CLI::App* cmd) {
        cmd->add_option("--z", o.z);
        cmd->add_option("--tstar", o.tstar);
        cmd->add_option("--delta1", o.d1);
        cmd->add_option("--delta2", o.d2);
        cmd->add_option("--delta3", o.d3);
        cmd->add_option("--delta4", o.d4);
    };

    CLI::App* check = app.add_subcommand("check", "validate quote structure and admissibility");
    add_common(check, true);

    CLI::App* feasify = app.add_subcommand("feasify", "bid/ask quotes to exact prices");
    add_common(feasify, true);
    feasify->add_option("--out", o.out);

    CLI::App* calibrate_cmd = app.add_subcommand("calibrate", "fit the model to quotes");
    add_common(calibrate_cmd, true);
    add_calib(calibrate_cmd);
    calibrate_cmd->add_option("--out", o.out);

    CLI::App* price = app.add_subcommand("price", "price a European payoff by the PDDE chain");
    price->add_option("--model", o.model)->required();
    price->add_option("--payoff", o.payoff)->required();
    price->add_option("--grid-n", o.grid_n);
    price->add_option("--out", o.out);

    CLI::App* iv = app.add_subcommand("iv", "implied volatilities of an exact-price CSV");
    iv->add_option("--quotes", o.quotes)->required();
    iv->add_option("--spot", o.spot)->required();
    iv->add_option("--out", o.out);

    CLI::App* coarsen = app.add_subcommand("coarsen", "smooth the model's coefficients");
    coarsen->add_option("--model", o.model)->required();
    coarsen->add_option("--bins", o.bins);
    coarsen->add_option("--out", o.out);

    CLI::App* mc = app.add_subcommand("mc-check", "Monte Carlo vs closed-form slice prices");
    mc->add_option("--model", o.model)->required();
    mc->add_option("--strike", o.strike);
    mc->add_option("--paths", o.paths);
    mc->add_option("--steps", o.steps);
    mc->add_option("--seed", o.seed);
    mc->add_option("--out", o.out);

    CLI::App* plot = app.add_subcommand("plot-data", "price/IV curves as CSV and SVG");
    plot->add_option("--model", o.model)->required();
    plot->add_option("--out", o.out);

    std::vector<const char*> argv{"lvg"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (check->parsed()) return cmd_check(o);
    if (feasify->parsed()) return cmd_feasify(o);
    if (calibrate_cmd->parsed()) return cmd_calibrate(o);
    if (price->parsed()) return cmd_price(o);
    if (iv->parsed()) return cmd_iv(o);
    if (coarsen->parsed()) return cmd_coarsen(o);
    if (mc->parsed()) return cmd_mc_check(o);
    if (plot->parsed()) return cmd_plot_data(o);
    return 1;
}

} // namespace

int run(const std::vector<std::string>& args) {
    try {
        return run_impl(args);
    } catch (const ContractError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace lvg::cli
