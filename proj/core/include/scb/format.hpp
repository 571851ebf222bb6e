#pragma once

#include <string>

namespace scb {

/// 17 significant digits, the CSV number format. Non-finite values print as
/// nan / inf / -inf.
std::string format_g17(double value);

}  // namespace scb
