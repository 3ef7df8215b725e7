#pragma once

#include <map>
#include <string>
#include <vector>

namespace sbmopa::emissions {

// CO2 per unit of oxidized carbon, molar-mass ratio.
inline constexpr double kCo2PerCarbon = 44.0 / 12.0;

struct FuelFactor {
    std::string fuel;
    double ncv = 0.0;  // average lower heating value per physical unit
    double cef = 0.0;  // carbon content per unit calorific value
    double cof = 0.0;  // carbon oxidation rate, in [0, 1]

    void validate() const;
};

struct EmissionResult {
    std::vector<std::pair<std::string, double>> per_fuel;  // alphabetical by fuel
    double total = 0.0;
    std::string units_note;
};

// total = sum over fuels of E * NCV * CEF * COF * 44/12. Fuels are summed in
// name order so the result does not depend on map insertion history.
EmissionResult compute_co2(const std::map<std::string, double>& consumption,
                           const std::map<std::string, FuelFactor>& factors);

} // namespace sbmopa::emissions
