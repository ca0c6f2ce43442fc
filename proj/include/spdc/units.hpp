#pragma once

#include <string>

namespace spdc {

enum class Dimension { length, time, angular_frequency, wavenumber };

const char* base_unit(Dimension d);

/// Parses "<number><unit>" with optional whitespace, e.g. "10 mm", "0.5ps",
/// "2e12 rad/s". Lengths: m mm um µm nm; times: s ps fs; angular frequency:
/// rad/s; wavenumber: rad/m 1/m. "inf" is accepted for lengths when
/// `allow_infinite`. The unit is mandatory. Throws DomainError.
double parse_quantity(const std::string& text, Dimension d, bool allow_infinite = false);

/// "%.17g <base unit>", which parse_quantity reads back bit-identically.
std::string format_quantity(double value, Dimension d);

}  // namespace spdc
