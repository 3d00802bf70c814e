#include "lvg/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lvg {

namespace {

using nlohmann::json;

json slice_to_obj(const LVGSlice& slice, bool with_header) {
    json obj;
    if (with_header) {
        obj["z"] = slice.z();
        obj["x"] = slice.spot();
    }
    obj["L"] = slice.lower();
    obj["U"] = slice.upper();
    obj["nu"] = slice.interior_knots();
    obj["sigma"] = slice.sigmas();
    return obj;
}

LVGSlice slice_from_obj(const json& obj, double z, double spot) {
    try {
        return LVGSlice(z, spot, obj.at("L").get<double>(), obj.at("U").get<double>(),
                        obj.at("nu").get<std::vector<double>>(),
                        obj.at("sigma").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw DataError(std::string("model JSON: ") + e.what());
    }
}

std::string num12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

std::string model_to_json(const NonHomLVGModel& model) {
    json obj;
    obj["z"] = model.z;
    obj["x"] = model.spot;
    obj["maturities"] = model.maturities;
    obj["slices"] = json::array();
    for (const LVGSlice& s : model.slices) obj["slices"].push_back(slice_to_obj(s, false));
    return obj.dump(2) + "\n";
}

NonHomLVGModel model_from_json(const std::string& text) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("model JSON: ") + e.what());
    }
    try {
        const double z = obj.at("z").get<double>();
        const double spot = obj.at("x").get<double>();
        std::vector<LVGSlice> slices;
        for (const json& s : obj.at("slices")) slices.push_back(slice_from_obj(s, z, spot));
        return assemble_model(std::move(slices), obj.at("maturities").get<std::vector<double>>(),
                              spot);
    } catch (const json::exception& e) {
        throw DataError(std::string("model JSON: ") + e.what());
    }
}

std::string slice_to_json(const LVGSlice& slice) {
    return slice_to_obj(slice, true).dump(2) + "\n";
}

LVGSlice slice_from_json(const std::string& text) {
    json obj;
    try {
        obj = json::parse(text);
        return slice_from_obj(obj, obj.at("z").get<double>(), obj.at("x").get<double>());
    } catch (const json::exception& e) {
        throw DataError(std::string("slice JSON: ") + e.what());
    }
}

std::string prices_to_csv(const AdmissiblePrices& prices) {
    std::ostringstream out;
    out << "maturity_days,strike,price,lower,upper\n";
    for (const MaturityPrices& m : prices.maturities)
        for (std::size_t j = 0; j < m.strikes.size(); ++j)
            out << m.days << ',' << num12(m.strikes[j]) << ',' << num12(m.prices[j]) << ','
                << num12(m.lower) << ',' << num12(m.upper) << '\n';
    return out.str();
}

AdmissiblePrices prices_from_csv(const std::string& text, double spot) {
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    AdmissiblePrices out;
    out.spot = spot;
    while (std::getline(ss, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "maturity_days,strike,price,lower,upper")
                throw DataError("ParseError: line 1: expected header "
                                "'maturity_days,strike,price,lower,upper'");
            continue;
        }
        std::stringstream ls(line);
        std::string f;
        std::vector<double> v;
        while (std::getline(ls, f, ',')) {
            char* end = nullptr;
            const double x = std::strtod(f.c_str(), &end);
            if (f.empty() || end != f.c_str() + f.size())
                throw DataError("ParseError: line " + std::to_string(line_no));
            v.push_back(x);
        }
        if (v.size() != 5) throw DataError("ParseError: line " + std::to_string(line_no));
        const int days = static_cast<int>(v[0]);
        MaturityPrices* mat = nullptr;
        for (MaturityPrices& m : out.maturities)
            if (m.days == days) mat = &m;
        if (mat == nullptr) {
            MaturityPrices m;
            m.days = days;
            m.tau = days / kWorkingDaysPerYear;
            m.lower = v[3];
            m.upper = v[4];
            out.maturities.push_back(m);
            mat = &out.maturities.back();
        }
        if (mat->lower != v[3] || mat->upper != v[4])
            throw DataError("ParseError: line " + std::to_string(line_no) +
                            ": inconsistent bounds within a maturity");
        mat->strikes.push_back(v[1]);
        mat->prices.push_back(v[2]);
    }
    std::sort(out.maturities.begin(), out.maturities.end(),
              [](const MaturityPrices& a, const MaturityPrices& b) { return a.days < b.days; });
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
}

} // namespace lvg
