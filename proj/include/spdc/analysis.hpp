#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spdc/amplitude.hpp"
#include "spdc/parallel.hpp"

namespace spdc {

// ---------------------------------------------------------------- scan grids

enum class ScanVariable { z_p, z_s, z_i, z_si, lambda_s };

const char* to_string(ScanVariable v);
/// Accepts "z_p", "z_s", "z_i", "z_si" (signal and idler locked), "lambda_s".
ScanVariable parse_scan_variable(const std::string& name);

struct ScanAxis {
  ScanVariable variable = ScanVariable::z_p;
  double start = 0.0;  // m
  double stop = 0.0;   // m
  int count = 0;

  /// count >= 2 with start < stop, or the single point count == 1, start == stop.
  void validate() const;
  std::vector<double> values() const;
};

/// Copy of `setup` with the focal shift(s) named by `v` set to `value`.
/// lambda_s is not a setup property and is rejected.
SpdcSetup apply_shift(const SpdcSetup& setup, ScanVariable v, double value);

struct ModePair {
  LGIndex signal;
  LGIndex idler;
};

struct OptimumPoint {
  std::vector<double> location;  // one coordinate per scan axis
  double value = 0.0;
  /// True when every coordinate was refined by a sub-grid parabola; false
  /// when the maximum sits on a grid edge and the sampled point is reported.
  bool refined = false;
};

/// Divides by the maximum; an all-zero input is returned unchanged.
std::vector<double> normalize_by_max(std::vector<double> values);

// -------------------------------------------------------------- basic scans

struct EfficiencyMap {
  std::vector<double> z_s;          // rows
  std::vector<double> z_i;          // columns
  std::vector<double> probability;  // |C|^2, row-major
  std::vector<double> normalized;
  OptimumPoint optimum;  // location = {z_s, z_i}
};

EfficiencyMap efficiency_map(const SpdcSetup& setup, const ScanAxis& z_s, const ScanAxis& z_i,
                             const ModePair& modes, const DetuningPair& detuning,
                             const ExecutionPolicy& policy = {});

struct FocusScan {
  std::vector<double> z_p;
  std::vector<double> probability;
  std::vector<double> normalized;
  std::optional<double> fwhm;  // empty when a half-maximum crossing is missing
};

FocusScan pump_focus_scan(const SpdcSetup& setup, const ScanAxis& z_p, const ModePair& modes,
                          const DetuningPair& detuning, const ExecutionPolicy& policy = {});

/// Full width at half maximum by linear interpolation of the crossings on
/// each side of the sampled maximum.
std::optional<double> full_width_half_max(const std::vector<double>& x,
                                          const std::vector<double>& y);

struct SpectralResponse {
  std::vector<double> wavelength;  // m
  std::vector<double> probability;
  std::vector<double> normalized;
  double peak_wavelength = 0.0;
  double peak_value = 0.0;
};

/// |C|^2 against the signal wavelength under a CW pump (Omega_i = -Omega_s).
SpectralResponse spectral_response(const SpdcSetup& setup, const ModePair& modes,
                                   const ScanAxis& wavelength,
                                   const ExecutionPolicy& policy = {});

struct ModeTable {
  std::vector<LGIndex> modes;       // p <= max_p, |l| <= max_l, ordered by p then l
  std::vector<double> probability;  // [signal index * modes.size() + idler index]
};

ModeTable mode_distribution(const SpdcSetup& setup, int max_p, int max_l,
                            const DetuningPair& detuning, const ExecutionPolicy& policy = {});

// ------------------------------------------------------ brightness, optimizer

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  bool on_edge = false;  // coarse maximum at a bracket edge
  double coarse_value = 0.0;
};

/// Golden-section maximization of a unimodal f on [a, b] to |interval| < tol.
ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double a,
                                      double b, double tol);

/// Coarse scan with `points` samples on [lo, hi], then golden section in the
/// cell pair around the best sample. The result is never below that sample.
ScalarOptimum bracketed_maximize(const std::function<double(double)>& f, double lo, double hi,
                                 int points, double tol);

struct BrightnessOptions {
  double band_start = 800e-9;  // m
  double band_stop = 820e-9;   // m
  int points = 2001;
  double tolerance = 1e-13;  // m, 1e-4 nm
};

struct Brightness {
  double peak_value = 0.0;
  double peak_wavelength = 0.0;
  double best_sample = 0.0;
  /// Maximum at a band edge: the band is too narrow.
  bool edge = false;
};

/// Maximum of |C|^2 over the signal wavelength under a CW pump.
Brightness spectral_brightness(const SpdcSetup& setup, const ModePair& modes,
                               const BrightnessOptions& options = {});

struct FocusObjective {
  enum class Kind { brightness, fixed_wavelength };
  Kind kind = Kind::brightness;
  double wavelength = 0.0;  // fixed_wavelength only
  BrightnessOptions brightness;
};

struct FocusSearch {
  double start = -15e-3;  // m
  double stop = 15e-3;
  int points = 31;
  double tolerance = 1e-5;  // m, 0.01 mm
};

/// Objective value at the given setup (shifts already applied).
double focus_objective(const SpdcSetup& setup, const ModePair& modes,
                       const FocusObjective& objective);

struct FocusPoint {
  double z_p = 0.0;
  double z_s_max = 0.0;
  double value = 0.0;
  double normalized = 0.0;
  bool ok = true;
  std::string status;  // "ok" or the reason the point failed
};

/// For each pump shift, the locked signal/idler shift z_s = z_i that
/// maximizes the objective. Failed points are reported, not thrown.
std::vector<FocusPoint> optimal_signal_focus(const SpdcSetup& setup,
                                             const std::vector<double>& z_p,
                                             const ModePair& modes,
                                             const FocusObjective& objective,
                                             const FocusSearch& search = {},
                                             const ExecutionPolicy& policy = {});

struct FocusPairOptimum {
  double z_s = 0.0;
  double z_i = 0.0;
  double value = 0.0;
};

/// Unconstrained maximization over (z_s, z_i) by alternating golden sections.
FocusPairOptimum optimal_focus_pair(const SpdcSetup& setup, const ModePair& modes,
                                    const FocusObjective& objective,
                                    const FocusSearch& search = {});

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least squares; R^2 = 1 for a constant y.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// ------------------------------------------------------------------ purity

struct JsaGridSpec {
  double signal_start = 0.0;  // rad/s
  double signal_stop = 0.0;
  int signal_count = 0;
  double idler_start = 0.0;
  double idler_stop = 0.0;
  int idler_count = 0;

  /// Symmetric square grid of `count` points over +-half_span on both axes.
  static JsaGridSpec symmetric(double half_span, int count);
  void validate() const;
  std::vector<double> signal_axis() const;
  std::vector<double> idler_axis() const;
};

struct JsaGrid {
  std::vector<double> omega_s;
  std::vector<double> omega_i;
  Eigen::MatrixXcd values;  // rows: Omega_s, columns: Omega_i
};

/// Dense FGM joint spectral amplitude including the pump envelope. Requires a
/// pulsed pump; the grid must span +-4/T0 and resolve the envelope with at
/// least 8 points per 1/e half-width (2/T0) on each axis.
JsaGrid jsa_grid(const SpdcSetup& setup, const JsaGridSpec& spec,
                 const ExecutionPolicy& policy = {});

/// sum sigma^4 / (sum sigma^2)^2 of the singular values of `m`.
double schmidt_purity(const Eigen::MatrixXcd& m);

double smf_spectral_purity(const JsaGrid& jsa);

/// Purity of the joint amplitude tensor indexed by (signal mode, Omega_s) x
/// (idler mode, Omega_i) flattened to a matrix.
double truncated_signal_purity(const SpdcSetup& setup, const std::vector<LGIndex>& modes,
                               const JsaGridSpec& spec, const ExecutionPolicy& policy = {});

struct PurityMap {
  std::vector<double> z_p;   // rows
  std::vector<double> z_si;  // columns, z_s = z_i
  std::vector<double> purity;
  OptimumPoint optimum;
};

PurityMap purity_map(const SpdcSetup& setup, const ScanAxis& z_p, const ScanAxis& z_si,
                     const JsaGridSpec& spec, const ExecutionPolicy& policy = {});

}  // namespace spdc
