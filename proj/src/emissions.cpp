#include "sbmopa/emissions.hpp"

#include <cmath>

#include "sbmopa/errors.hpp"

namespace sbmopa::emissions {

void FuelFactor::validate() const {
    if (!std::isfinite(ncv) || ncv < 0.0 || !std::isfinite(cef) || cef < 0.0) {
        throw ValidationError("fuel '" + fuel + "' has a negative or non-finite factor");
    }
    if (!std::isfinite(cof) || cof < 0.0 || cof > 1.0) {
        throw ValidationError("fuel '" + fuel + "' has an oxidation rate outside [0, 1]");
    }
}

EmissionResult compute_co2(const std::map<std::string, double>& consumption,
                           const std::map<std::string, FuelFactor>& factors) {
    EmissionResult result;
    result.units_note =
        "per-fuel: consumption unit x NCV x CEF x COF x 44/12; consistent units assumed";
    for (const auto& [fuel, amount] : consumption) {
        if (!std::isfinite(amount) || amount < 0.0) {
            throw ValidationError("negative or non-finite consumption for fuel '" + fuel + "'");
        }
        const auto it = factors.find(fuel);
        if (it == factors.end()) {
            throw ValidationError("no emission factor for fuel '" + fuel + "'");
        }
        it->second.validate();
        const FuelFactor& f = it->second;
        const double ce = amount * f.ncv * f.cef * f.cof * kCo2PerCarbon;
        result.per_fuel.emplace_back(fuel, ce);
        result.total += ce;
    }
    return result;
}

} // namespace sbmopa::emissions
