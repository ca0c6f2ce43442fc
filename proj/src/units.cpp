#include "spdc/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>
#include <vector>

#include "spdc/error.hpp"

namespace spdc {
namespace {

// Unit name and decimal exponent of its SI factor.
using UnitTable = std::vector<std::pair<std::string, int>>;

const UnitTable& units_for(Dimension d) {
  static const UnitTable length = {
      {"m", 0}, {"mm", -3}, {"um", -6}, {"\xC2\xB5m", -6}, {"nm", -9}};
  static const UnitTable time = {{"s", 0}, {"ps", -12}, {"fs", -15}};
  static const UnitTable angular = {{"rad/s", 0}};
  static const UnitTable wavenumber = {{"rad/m", 0}, {"1/m", 0}};
  switch (d) {
    case Dimension::length: return length;
    case Dimension::time: return time;
    case Dimension::angular_frequency: return angular;
    case Dimension::wavenumber: return wavenumber;
  }
  return length;
}

std::string accepted(Dimension d) {
  std::string out;
  for (const auto& [name, exponent] : units_for(d)) out += (out.empty() ? "" : ", ") + name;
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

const char* base_unit(Dimension d) {
  switch (d) {
    case Dimension::length: return "m";
    case Dimension::time: return "s";
    case Dimension::angular_frequency: return "rad/s";
    case Dimension::wavenumber: return "rad/m";
  }
  return "";
}

double parse_quantity(const std::string& raw, Dimension d, bool allow_infinite) {
  const std::string text = trim(raw);
  if (allow_infinite && text == "inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr == first) {
    throw DomainError("'" + raw + "' does not start with a number");
  }
  if (!std::isfinite(value)) throw DomainError("'" + raw + "' is not finite");
  const std::string unit = trim(std::string(ptr, last));
  if (unit.empty()) {
    throw DomainError("'" + raw + "' has no unit (expected one of: " + accepted(d) + ")");
  }
  for (const auto& [name, exponent] : units_for(d)) {
    if (unit != name) continue;
    if (exponent == 0) return value;
    // Shift the decimal exponent in the text so the result is correctly rounded.
    std::string number(first, ptr);
    int e = 0;
    const std::size_t epos = number.find_first_of("eE");
    if (epos != std::string::npos) {
      e = std::stoi(number.substr(epos + 1));
      number.resize(epos);
    }
    number += "e" + std::to_string(e + exponent);
    double scaled = 0.0;
    std::from_chars(number.data(), number.data() + number.size(), scaled);
    return scaled;
  }
  throw DomainError("'" + raw + "' has unknown unit '" + unit + "' (expected one of: " +
                    accepted(d) + ")");
}

std::string format_quantity(double value, Dimension d) {
  if (std::isinf(value) && value > 0.0) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g %s", value, base_unit(d));
  return buf;
}

}  // namespace spdc
