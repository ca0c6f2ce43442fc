#include "spdc/dispersion.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "spdc/error.hpp"

namespace spdc {
namespace {

struct SellmeierTerms {
  double f;    // n^2
  double df;   // d(n^2)/d(l^2)
  double d2f;  // d^2(n^2)/d(l^2)^2
};

SellmeierTerms evaluate_terms(const SellmeierModel& model, double lambda_um) {
  const auto& c = model.coefficients;
  const double x = lambda_um * lambda_um;
  const std::size_t poles = (c.size() - 2) / 2;
  const double d = c.back();
  SellmeierTerms t{c[0] - d * x, -d, 0.0};
  for (std::size_t j = 0; j < poles; ++j) {
    const double b = c[1 + 2 * j];
    const double inv = 1.0 / (x - c[2 + 2 * j]);
    t.f += b * inv;
    t.df -= b * inv * inv;
    t.d2f += 2.0 * b * inv * inv * inv;
  }
  return t;
}

std::string range_message(const SellmeierModel& model, double wavelength_m) {
  std::ostringstream os;
  os << "wavelength " << wavelength_m * 1e6 << " um outside the valid range ["
     << model.min_wavelength_um << ", " << model.max_wavelength_um << "] um of model '"
     << model.name << "'";
  return os.str();
}

const std::map<std::string, SellmeierModel>& registry() {
  static const std::map<std::string, SellmeierModel> models = {
      {"ktp-z-default",
       {"ktp-z-default", {4.59423, 0.06206, 0.04763, 110.80672, 86.12171, 0.0}, 0.39, 3.5}},
      {"ktp-y-default",
       {"ktp-y-default", {3.45018, 0.04341, 0.04597, 16.98825, 39.43799, 0.0}, 0.39, 3.5}},
  };
  return models;
}

}  // namespace

void SellmeierModel::validate() const {
  if (coefficients.size() < 2 || coefficients.size() % 2 != 0) {
    throw DomainError("Sellmeier model '" + name +
                      "' needs coefficients [A, B1, C1, ..., Bm, Cm, D] (even count >= 2)");
  }
  if (!(min_wavelength_um > 0.0) || !(max_wavelength_um > min_wavelength_um)) {
    throw DomainError("Sellmeier model '" + name + "' has an empty valid range");
  }
}

bool SellmeierModel::contains(double wavelength_m) const noexcept {
  // Edges are inclusive up to the rounding of the m -> um conversion.
  const double um = wavelength_m * 1e6;
  const double slack = 4.0 * std::numeric_limits<double>::epsilon();
  return um >= min_wavelength_um * (1.0 - slack) && um <= max_wavelength_um * (1.0 + slack);
}

const SellmeierModel& builtin_model(const std::string& name) {
  const auto& r = registry();
  auto it = r.find(name);
  if (it == r.end()) throw DomainError("unknown dispersion model '" + name + "'");
  return it->second;
}

std::vector<std::string> builtin_model_names() {
  std::vector<std::string> names;
  for (const auto& [name, model] : registry()) names.push_back(name);
  return names;
}

double refractive_index(const SellmeierModel& model, double wavelength_m) {
  if (!model.contains(wavelength_m)) throw RangeError(range_message(model, wavelength_m));
  const double n2 = evaluate_terms(model, wavelength_m * 1e6).f;
  if (!(n2 > 1.0)) {
    throw NumericalError("model '" + model.name + "' gives n^2 <= 1 inside its valid range");
  }
  return std::sqrt(n2);
}

double wavenumber_at_frequency(const SellmeierModel& model, double omega) {
  return omega * refractive_index(model, wavelength_of(omega)) / kSpeedOfLight;
}

OpticalConstants optical_constants(const SellmeierModel& model, double wavelength_m) {
  const double omega = angular_frequency(wavelength_m);
  for (double edge : {omega - kStencilMargin, omega + kStencilMargin}) {
    if (!model.contains(wavelength_of(edge))) {
      throw RangeError(range_message(model, wavelength_m) + " (derivative stencil margin)");
    }
  }
  const double lambda_um = wavelength_m * 1e6;
  const double n = refractive_index(model, wavelength_m);
  const SellmeierTerms t = evaluate_terms(model, lambda_um);

  // dn/dl and d^2n/dl^2 in um^-1 and um^-2.
  const double l2 = lambda_um * lambda_um;
  const double dn = lambda_um * t.df / n;
  const double d2n = t.df / n + 2.0 * l2 * t.d2f / n - l2 * t.df * t.df / (n * n * n);

  OpticalConstants out;
  out.k = 2.0 * kPi * n / wavelength_m;
  out.inv_u = (n - lambda_um * dn) / kSpeedOfLight;
  out.gvd = l2 * lambda_um * d2n * 1e-6 / (2.0 * kPi * kSpeedOfLight * kSpeedOfLight);
  return out;
}

CrystalConfig CrystalConfig::from_pump_signal(double length, double pump_wavelength,
                                              double signal_wavelength) {
  CrystalConfig c;
  c.length = length;
  c.pump_wavelength = pump_wavelength;
  c.signal_wavelength = signal_wavelength;
  c.idler_wavelength = 1.0 / (1.0 / pump_wavelength - 1.0 / signal_wavelength);
  c.validate();
  return c;
}

void CrystalConfig::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("crystal length must be positive");
  }
  if (!(pump_wavelength > 0.0) || !(signal_wavelength > 0.0) || !(idler_wavelength > 0.0)) {
    throw DomainError("central wavelengths must be positive");
  }
  const double lhs = 1.0 / pump_wavelength;
  const double rhs = 1.0 / signal_wavelength + 1.0 / idler_wavelength;
  if (std::abs(lhs - rhs) > 1e-12 * lhs) {
    throw DomainError("central wavelengths violate energy conservation 1/l_p = 1/l_s + 1/l_i");
  }
  if (has_poling_period() && !(poling_period > 0.0)) {
    throw DomainError("poling period must be positive (or infinite for an unpoled crystal)");
  }
}

double phase_mismatch(const ConstantsTriple& constants, double poling_period) {
  const double dk = constants.pump.k - constants.signal.k - constants.idler.k;
  if (std::isinf(poling_period)) return dk;
  return dk - 2.0 * kPi / poling_period;
}

double solve_poling_period(const CrystalConfig& crystal, const ModelTriple& models) {
  crystal.validate();
  const double kp = 2.0 * kPi * refractive_index(models.pump, crystal.pump_wavelength) /
                    crystal.pump_wavelength;
  const double ks = 2.0 * kPi * refractive_index(models.signal, crystal.signal_wavelength) /
                    crystal.signal_wavelength;
  const double ki = 2.0 * kPi * refractive_index(models.idler, crystal.idler_wavelength) /
                    crystal.idler_wavelength;
  const double dk = kp - ks - ki;
  if (!(dk > 0.0)) {
    throw NoSolutionError("k_p - k_s - k_i <= 0: no positive poling period phase-matches");
  }
  return 2.0 * kPi / dk;
}

}  // namespace spdc
