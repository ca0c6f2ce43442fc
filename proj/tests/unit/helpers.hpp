#pragma once

#include <cmath>
#include <complex>

#include "spdc/amplitude.hpp"

namespace testing {

inline double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline double rel(std::complex<double> a, std::complex<double> b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// 405 nm -> 810 nm; type_ii selects y/z/y polarizations, otherwise z/z/z.
inline spdc::SpdcSetup make_setup(double length, double w_p, double w_s, double w_i,
                                  bool type_ii = false,
                                  spdc::PumpSpectrum spectrum = spdc::PumpSpectrum::continuous(),
                                  double z_p = 0.0, double z_s = 0.0, double z_i = 0.0) {
  const auto crystal = spdc::CrystalConfig::from_pump_signal(length, 405e-9, 810e-9);
  const char* outer = type_ii ? "ktp-y-default" : "ktp-z-default";
  const spdc::ModelTriple models{spdc::builtin_model(outer), spdc::builtin_model("ktp-z-default"),
                                 spdc::builtin_model(outer)};
  return spdc::SpdcSetup(crystal, models, {w_p, z_p}, {w_s, z_s}, {w_i, z_i}, spectrum);
}

}  // namespace testing
