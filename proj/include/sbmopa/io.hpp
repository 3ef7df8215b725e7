#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sbmopa/emissions.hpp"
#include "sbmopa/panel.hpp"
#include "sbmopa/scenario.hpp"

namespace sbmopa::io {

// ---- files ----
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// ---- csv ----
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// RFC-style: quoted fields may contain commas, doubled quotes and newlines.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::string& path);
std::string csv_escape(const std::string& field);
std::string to_csv(const CsvTable& table);

// ---- numbers ----
// All serialized numbers are rounded to 12 significant digits first, so
// reports are stable byte-for-byte across reruns.
double round_sig(double value);
std::string format_number(double value);
double parse_number(const std::string& text, const std::string& where);

// ---- panel ----
// Roles config: {"L": "input", ...} or {"L": {"role": "input", "unit": "..."}}.
std::map<std::string, PanelVariable> roles_from_json(const std::string& text);
DmuPanel panel_from_csv(const CsvTable& table,
                        const std::map<std::string, PanelVariable>& roles);
DmuPanel load_panel(const std::string& csv_path, const std::string& roles_path);

// ---- policies & scenarios ----
struct PolicyFile {
    std::vector<scenario::PolicyDefinition> policies;
    bool all_permutations = true;
    std::vector<scenario::ScenarioSpec> explicit_scenarios;
    bool absolute_correlation = false;
};
PolicyFile policies_from_json(const std::string& text);
PolicyFile load_policies(const std::string& path);

// ---- emissions ----
// factor csv: fuel,ncv,cef,cof
std::map<std::string, emissions::FuelFactor> fuel_factors_from_csv(const CsvTable& table);
std::map<std::string, emissions::FuelFactor> load_fuel_factors(const std::string& path);
// consumption csv: dmu_id,<one column per fuel>
struct ConsumptionTable {
    std::vector<std::string> dmu_ids;
    std::vector<std::string> fuels;
    std::vector<std::map<std::string, double>> rows;
};
ConsumptionTable consumption_from_csv(const CsvTable& table);
ConsumptionTable load_consumption(const std::string& path);

} // namespace sbmopa::io
