#include "scb/units.hpp"

namespace scb {

namespace {

constexpr double kRoundedRatePerMicroev = 1e11 / 500.0;
// hbar = 6.582119569e-16 eV s
constexpr double kExactRatePerMicroev = 1e-6 / 6.582119569e-16;

double factor(EnergyConvention convention) {
  return convention == EnergyConvention::kRounded ? kRoundedRatePerMicroev : kExactRatePerMicroev;
}

}  // namespace

std::string_view to_string(EnergyConvention convention) {
  return convention == EnergyConvention::kRounded ? "rounded" : "exact";
}

double microev_to_rate(double microev, EnergyConvention convention) { return microev * factor(convention); }

double rate_to_microev(double rate, EnergyConvention convention) { return rate / factor(convention); }

}  // namespace scb
