#include "spdc/modes.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "spdc/dispersion.hpp"
#include "spdc/error.hpp"

namespace spdc {
namespace {

constexpr std::array<double, 21> kFactorials = [] {
  std::array<double, 21> f{};
  f[0] = 1.0;
  for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * static_cast<double>(i);
  return f;
}();

// i^l for signed l.
cdouble i_power(int l) {
  switch (((l % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

LGIndex parse_lg_index(const std::string& text) {
  std::istringstream is(text);
  LGIndex m;
  char comma = 0;
  if (!(is >> m.p >> comma >> m.l) || comma != ',') {
    throw DomainError("mode '" + text + "' is not of the form \"p,l\"");
  }
  is >> std::ws;
  if (!is.eof()) throw DomainError("trailing characters in mode '" + text + "'");
  if (m.p < 0) throw DomainError("mode '" + text + "' has negative radial number");
  return m;
}

std::string to_string(const LGIndex& mode) {
  return std::to_string(mode.p) + "," + std::to_string(mode.l);
}

std::vector<LGIndex> mode_block(int max_p, int max_l) {
  if (max_p < 0 || max_l < 0) throw DomainError("mode block bounds must be non-negative");
  std::vector<LGIndex> out;
  for (int p = 0; p <= max_p; ++p)
    for (int l = -max_l; l <= max_l; ++l) out.push_back({p, l});
  return out;
}

void BeamGeometry::validate(const char* which) const {
  if (!(waist > 0.0) || !std::isfinite(waist)) {
    throw DomainError(std::string(which) + " waist must be positive");
  }
  if (!std::isfinite(focal_shift)) {
    throw DomainError(std::string(which) + " focal shift must be finite");
  }
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative integer");
  if (n < static_cast<int>(kFactorials.size())) return std::log(kFactorials[n]);
  return std::lgamma(static_cast<double>(n) + 1.0);
}

cdouble t_coefficient_scaled(int p, int l, int k, double waist_over_unit) {
  if (p < 0 || k < 0 || k > p) throw DomainError("t_coefficient requires 0 <= k <= p");
  const int al = std::abs(l);
  const double log_mag = 0.5 * (log_factorial(p) + log_factorial(p + al) - std::log(kPi)) -
                         log_factorial(p - k) - log_factorial(al + k) - log_factorial(k) +
                         (2 * k + al + 1) * std::log(waist_over_unit / std::sqrt(2.0));
  const double sign = ((p + k) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(log_mag) * i_power(l);
}

cdouble t_coefficient(int p, int l, int k, double waist) {
  if (p < 0 || k < 0 || k > p) throw DomainError("t_coefficient requires 0 <= k <= p");
  const int al = std::abs(l);
  if (p + al <= 20) {
    const double sign = ((p + k) % 2 == 0) ? 1.0 : -1.0;
    const double mag = std::sqrt(kFactorials[p] * kFactorials[p + al] / kPi) /
                       (kFactorials[p - k] * kFactorials[al + k] * kFactorials[k]) *
                       std::pow(waist / std::sqrt(2.0), 2 * k + al + 1);
    return sign * mag * i_power(l);
  }
  return t_coefficient_scaled(p, l, k, waist);
}

cdouble lg_momentum_amplitude(const LGIndex& mode, double waist, double qx, double qy) {
  if (mode.p < 0) throw DomainError("negative radial number");
  const int al = std::abs(mode.l);
  const double rho2 = qx * qx + qy * qy;
  const double u2 = 0.5 * waist * waist * rho2;  // (w rho / sqrt 2)^2

  // Generalised Laguerre L_p^{|l|}(u2) by upward recurrence.
  double lm1 = 1.0;
  double lcur = 1.0 + al - u2;
  if (mode.p == 0) lcur = 1.0;
  for (int n = 1; n < mode.p; ++n) {
    const double next = ((2.0 * n + 1.0 + al - u2) * lcur - (n + al) * lm1) / (n + 1.0);
    lm1 = lcur;
    lcur = next;
  }

  const double norm =
      std::exp(0.5 * (log_factorial(mode.p) - log_factorial(mode.p + al) - std::log(kPi)));
  const double radial = norm * (waist / std::sqrt(2.0)) * std::pow(std::sqrt(u2), al) * lcur *
                        std::exp(-0.5 * u2);
  const double sign = (mode.p % 2 == 0) ? 1.0 : -1.0;
  const double phi = std::atan2(qy, qx);
  return sign * radial * i_power(mode.l) * std::polar(1.0, mode.l * phi);
}

}  // namespace spdc
