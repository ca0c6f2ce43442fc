#pragma once

#include <limits>
#include <string>
#include <vector>

namespace spdc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

/// Sellmeier model of the form
///
///   n^2(l) = A + sum_j B_j / (l^2 - C_j) - D l^2,     l in micrometres,
///
/// stored as the flat coefficient list [A, B_1, C_1, ..., B_m, C_m, D].
/// Evaluation outside [min_wavelength_um, max_wavelength_um] throws.
struct SellmeierModel {
  std::string name;
  std::vector<double> coefficients;
  double min_wavelength_um = 0.0;
  double max_wavelength_um = 0.0;

  /// Throws DomainError for a malformed coefficient list or interval.
  void validate() const;
  bool contains(double wavelength_m) const noexcept;
};

/// Built-in models. "ktp-z-default" and "ktp-y-default" are KTP principal
/// indices n_z and n_y (Kato & Takaoka 2002).
const SellmeierModel& builtin_model(const std::string& name);
std::vector<std::string> builtin_model_names();

/// Central-frequency expansion of k(Omega) = k + Omega/u + G Omega^2 / 2.
struct OpticalConstants {
  double k = 0.0;      // rad/m
  double inv_u = 0.0;  // s/m, dk/dOmega
  double gvd = 0.0;    // s^2/m, d^2k/dOmega^2
};

/// Frequencies that keep the derivative stencils of the test oracles inside a
/// model's range: evaluation requires omega +- kStencilMargin to be valid.
inline constexpr double kStencilMargin = 2.0e12;  // rad/s

double refractive_index(const SellmeierModel& model, double wavelength_m);

/// Analytic k, 1/u and G at the given vacuum wavelength.
OpticalConstants optical_constants(const SellmeierModel& model, double wavelength_m);

/// Wavenumber k(omega) = omega n(2 pi c / omega) / c.
double wavenumber_at_frequency(const SellmeierModel& model, double omega);

inline double angular_frequency(double wavelength_m) {
  return 2.0 * kPi * kSpeedOfLight / wavelength_m;
}
inline double wavelength_of(double omega) { return 2.0 * kPi * kSpeedOfLight / omega; }

struct CrystalConfig {
  double length = 0.0;  // m
  /// Poling period in metres; infinity represents an unpoled crystal. NaN
  /// means "not set" and is resolved by solve_poling_period.
  double poling_period = std::numeric_limits<double>::quiet_NaN();
  double pump_wavelength = 0.0;
  double signal_wavelength = 0.0;
  double idler_wavelength = 0.0;

  /// Idler wavelength from energy conservation.
  static CrystalConfig from_pump_signal(double length, double pump_wavelength,
                                        double signal_wavelength);
  void validate() const;
  bool has_poling_period() const noexcept { return poling_period == poling_period; }
};

struct ModelTriple {
  SellmeierModel pump;
  SellmeierModel signal;
  SellmeierModel idler;
};

struct ConstantsTriple {
  OpticalConstants pump;
  OpticalConstants signal;
  OpticalConstants idler;
};

/// k_p - k_s - k_i - 2 pi / period. An infinite period gives the unpoled value.
double phase_mismatch(const ConstantsTriple& constants, double poling_period);

/// Period that zeroes phase_mismatch at the central frequencies.
double solve_poling_period(const CrystalConfig& crystal, const ModelTriple& models);

}  // namespace spdc
