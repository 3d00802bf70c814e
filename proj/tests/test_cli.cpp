#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "lvg/numerics.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "lvg_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string bs_quote_csv(double spot, const std::vector<int>& days,
                         const std::vector<double>& strikes, double vol) {
    std::ostringstream out;
    out << "maturity_days,strike,bid,ask,volume\n";
    char buf[160];
    for (int d : days)
        for (double k : strikes) {
            const double tau = d / 252.0;
            const double p = lvg::numerics::black_scholes_call(spot, k, tau, vol);
            const double w = std::max(0.005 * p, 1e-4 * spot);
            std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,100\n", d, k,
                          std::max(p - w, 0.0), p + w);
            out << buf;
        }
    return out.str();
}

} // namespace

TEST_CASE("check accepts a clean market and flags a collinear one") {
    const fs::path dir = temp_dir();
    const fs::path good = dir / "good.csv";
    spit(good, bs_quote_csv(100.0, {10, 30}, {90.0, 100.0, 110.0}, 0.2));
    CHECK(lvg::cli::run({"check", "--quotes", good.string(), "--spot", "100"}) == 0);

    const fs::path bad = dir / "bad.csv";
    spit(bad,
         "maturity_days,strike,bid,ask,volume\n"
         "10,90,12,12,1\n10,100,8,8,1\n10,110,4,4,1\n");  // collinear midpoints
    CHECK(lvg::cli::run({"check", "--quotes", bad.string(), "--spot", "100"}) == 1);
}

TEST_CASE("missing input file maps to exit 1") {
    CHECK(lvg::cli::run({"check", "--quotes", "/nonexistent/q.csv", "--spot", "100"}) == 1);
}

TEST_CASE("unknown subcommand maps to a parse failure") {
    CHECK(lvg::cli::run({"frobnicate"}) != 0);
}

TEST_CASE("feasify then iv round trips") {
    const fs::path dir = temp_dir();
    const fs::path quotes = dir / "q.csv";
    spit(quotes, bs_quote_csv(100.0, {20}, {90.0, 95.0, 100.0, 105.0, 110.0}, 0.25));
    const fs::path prices = dir / "p.csv";
    CHECK(lvg::cli::run({"feasify", "--quotes", quotes.string(), "--spot", "100", "--out",
                         prices.string()}) == 0);
    const fs::path ivs = dir / "iv.csv";
    CHECK(lvg::cli::run({"iv", "--quotes", prices.string(), "--spot", "100", "--out",
                         ivs.string()}) == 0);
    const std::string text = slurp(ivs);
    CHECK(text.rfind("maturity_days,strike,price,iv", 0) == 0);
}

TEST_CASE("calibrate, price, coarsen, mc-check, plot-data pipeline") {
    const fs::path dir = temp_dir();
    const fs::path quotes = dir / "q2.csv";
    spit(quotes, bs_quote_csv(100.0, {10, 30}, {85.0, 95.0, 100.0, 105.0, 115.0}, 0.25));
    const fs::path model = dir / "model.json";
    CHECK(lvg::cli::run({"calibrate", "--quotes", quotes.string(), "--spot", "100", "--out",
                         model.string()}) == 0);
    CHECK(fs::exists(model));
    CHECK(fs::exists(dir / "model.json.knots.csv"));

    const fs::path px = dir / "px.csv";
    CHECK(lvg::cli::run({"price", "--model", model.string(), "--payoff", "call:100",
                         "--grid-n", "400", "--out", px.string()}) == 0);
    CHECK(slurp(px).rfind("maturity_years,price", 0) == 0);

    const fs::path coarse = dir / "coarse.json";
    CHECK(lvg::cli::run({"coarsen", "--model", model.string(), "--bins", "6", "--out",
                         coarse.string()}) == 0);

    const fs::path mc = dir / "mc.csv";
    CHECK(lvg::cli::run({"mc-check", "--model", model.string(), "--paths", "2000", "--steps",
                         "50", "--out", mc.string()}) == 0);
    CHECK(slurp(mc).rfind("slice,strike,price,std_error,closed_form,abs_diff", 0) == 0);

    CHECK(lvg::cli::run({"plot-data", "--model", model.string(), "--out",
                         (dir / "plot").string()}) == 0);
    CHECK(fs::exists(dir / "plot.csv"));
    CHECK(fs::exists(dir / "plot.svg"));
}

TEST_CASE("calibrate runs are byte-identical") {
    const fs::path dir = temp_dir();
    const fs::path quotes = dir / "q3.csv";
    spit(quotes, bs_quote_csv(100.0, {10, 30}, {90.0, 100.0, 110.0}, 0.22));
    const fs::path m1 = dir / "m1.json", m2 = dir / "m2.json";
    CHECK(lvg::cli::run({"calibrate", "--quotes", quotes.string(), "--spot", "100", "--out",
                         m1.string()}) == 0);
    CHECK(lvg::cli::run({"calibrate", "--quotes", quotes.string(), "--spot", "100", "--out",
                         m2.string()}) == 0);
    CHECK(slurp(m1) == slurp(m2));
    CHECK(!slurp(m1).empty());
}
