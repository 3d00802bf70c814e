#pragma once

#include <string>

#include "lvg/market_data.hpp"
#include "lvg/surface.hpp"

namespace lvg {

// Model JSON: {"z":..., "x":..., "maturities":[...], "slices":[{nu,sigma,L,U}...]}
// where nu lists the interior knots only.
std::string model_to_json(const NonHomLVGModel& model);
NonHomLVGModel model_from_json(const std::string& text);

// Single slice JSON: {"z","x","L","U","nu","sigma"}.
std::string slice_to_json(const LVGSlice& slice);
LVGSlice slice_from_json(const std::string& text);

// Exact-price CSV: header `maturity_days,strike,price,lower,upper`.
std::string prices_to_csv(const AdmissiblePrices& prices);
AdmissiblePrices prices_from_csv(const std::string& text, double spot);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace lvg
