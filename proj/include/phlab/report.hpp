// JSON and CSV serialization of estimator outputs.
//
// Every real is written with 17 significant digits; infinities become the strings "inf" /
// "-inf" and NaN becomes null. Bump kSchemaVersion whenever a field is renamed or removed.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "phlab/decomposition.hpp"
#include "phlab/specification.hpp"

namespace phlab {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr const char* kSchemaName = "phlab";

// Stores v so that write_json reproduces it exactly (non-finite values are tagged).
Json real(double v);
std::string write_json(const Json& j);
std::string format_csv_real(double v);

Json to_json(const SystemSpec& sys);
Json to_json(const PressureEstimate& e);
Json to_json(const BadPressureReport& r);
Json to_json(const RScanReport& r);
Json to_json(const GlueReport& r);
Json to_json(const ExpansivityReport& r);
Json to_json(const Certificate& c);

// Columns: n,count,logLambda,slope_so_far
std::string per_n_csv(const PressureEstimate& e);
// Columns: r,fraction_good,bad_pressure,full_pressure,gap
std::string r_scan_csv(const RScanReport& r);
// Columns: sample,diameter,center_exponent
std::string expansivity_csv(const ExpansivityReport& r);
// One glued state per line: index then coordinates.
std::string glue_trace_text(const GlueReport& r);

}  // namespace phlab
