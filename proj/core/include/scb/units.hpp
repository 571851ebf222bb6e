#pragma once

#include <string_view>

namespace scb {

/// How an energy in micro-electronvolts is mapped to an angular frequency.
enum class EnergyConvention {
  kRounded,  // order-of-magnitude rounding: 500 ueV ~ 1e11 s^-1
  kExact,    // E / hbar with CODATA hbar
};

std::string_view to_string(EnergyConvention convention);

/// Rate in s^-1 (hbar = 1) corresponding to an energy in ueV.
double microev_to_rate(double microev, EnergyConvention convention);
double rate_to_microev(double rate, EnergyConvention convention);

}  // namespace scb
