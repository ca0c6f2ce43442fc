#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spdc/amplitude.hpp"
#include "spdc/analysis.hpp"
#include "spdc/oracle.hpp"

namespace spdc {

enum class Normalize { max, none };

struct ModelSpec {
  /// Built-in name, or the name of an inline model when `coefficients` is set.
  std::string name = "ktp-z-default";
  bool is_inline = false;
  SellmeierModel model;  // resolved
};

/// Everything a subcommand needs. Lengths in m, times in s, frequencies in
/// rad/s; every dimensional value in the file must carry a unit.
struct RunConfig {
  double length = 0.0;
  double pump_wavelength = 0.0;
  double signal_wavelength = 0.0;
  std::optional<double> poling_period;  // empty: solved from the QPM condition

  ModelSpec pump_model;
  ModelSpec signal_model;
  ModelSpec idler_model;

  BeamGeometry pump;
  BeamGeometry signal;
  BeamGeometry idler;
  PumpSpectrum spectrum;

  ModePair modes;
  /// Detuning either as a filtered signal wavelength or as explicit offsets.
  std::optional<double> detuning_wavelength;
  std::optional<DetuningPair> detuning;

  std::vector<ScanAxis> scan;
  BrightnessOptions band;
  FocusObjective objective;
  FocusSearch search;
  int max_p = 2;
  int max_l = 2;
  std::optional<JsaGridSpec> jsa;
  OracleGrid oracle;
  Normalize normalize = Normalize::max;

  /// Physical setup; validation failures become ConfigError.
  SpdcSetup build_setup() const;
  /// Explicit offsets, else the filtered wavelength, else zero detuning.
  DetuningPair resolved_detuning(const SpdcSetup& setup) const;
  /// Configured grid, else +-11/T0 with 201 points per axis.
  JsaGridSpec resolved_jsa() const;
};

/// Strict parse: unknown keys, missing units and malformed values throw
/// ConfigError with the 1-based line and column of the offending node.
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::string& path);

/// Canonical YAML of the resolved configuration. parse_config(echo_config(c))
/// reproduces c bit-identically.
std::string echo_config(const RunConfig& config);

}  // namespace spdc
