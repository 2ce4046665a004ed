#pragma once

#include <string>

namespace lpbias {

/// Shortest-form-independent rendering with 17 significant digits, enough to
/// round-trip any double.
std::string format_real(double value);

/// Fixed rendering for report tables.
std::string format_fixed(double value, int decimals);

}  // namespace lpbias
