#pragma once

#include <string>

#include <json.hpp>

#include "basket/bvp.hpp"
#include "basket/expansion.hpp"
#include "basket/focality.hpp"
#include "basket/oracle.hpp"

namespace basket {

using json = nlohmann::json;

// Document keys: {d, spots, vols, corr, rate, weights, maturity}; corr is a
// row-major array of rows. rate, weights and maturity are optional on input.
// Throws ConfigError naming the offending field.
json spec_to_json(const BasketSpec& spec);
BasketSpec spec_from_json(const json& j);
BasketSpec spec_from_file_or_inline(const std::string& path_or_json);

json energy_solution_to_json(const EnergySolution& sol);
json focality_report_to_json(const FocalityReport& report);
json expansion_result_to_json(const ExpansionResult& r);
json density_curve_to_json(const DensityCurve& curve);

std::string density_curve_to_csv(const DensityCurve& curve);

// 17-significant-digit decimal rendering, '.' decimal point, round-trip safe.
std::string format_double(double v);

const char* to_string(FocalityVerdict v);
const char* to_string(Regime r);
const char* to_string(DensityMethod m);

}  // namespace basket
