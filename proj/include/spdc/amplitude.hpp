#pragma once

#include <array>
#include <complex>
#include <memory>
#include <mutex>
#include <vector>

#include "spdc/dispersion.hpp"
#include "spdc/modes.hpp"
#include "spdc/quadrature.hpp"

namespace spdc {

enum class SpectrumKind { continuous_wave, pulsed_gaussian };

struct PumpSpectrum {
  SpectrumKind kind = SpectrumKind::continuous_wave;
  double pulse_duration = 0.0;  // s, T0; pulsed only

  static PumpSpectrum continuous() { return {}; }
  static PumpSpectrum pulsed(double t0) { return {SpectrumKind::pulsed_gaussian, t0}; }
  bool is_cw() const noexcept { return kind == SpectrumKind::continuous_wave; }
  void validate() const;
};

/// Angular-frequency offsets from the central signal and idler frequencies.
struct DetuningPair {
  double signal = 0.0;  // rad/s
  double idler = 0.0;   // rad/s
};

/// Full physical scenario. Immutable after construction; optical constants
/// are derived once and the poling period is solved when not given.
class SpdcSetup {
 public:
  SpdcSetup(CrystalConfig crystal, ModelTriple models, BeamGeometry pump, BeamGeometry signal,
            BeamGeometry idler, PumpSpectrum spectrum);

  const CrystalConfig& crystal() const noexcept { return crystal_; }
  const ModelTriple& models() const noexcept { return models_; }
  const BeamGeometry& pump() const noexcept { return pump_; }
  const BeamGeometry& signal() const noexcept { return signal_; }
  const BeamGeometry& idler() const noexcept { return idler_; }
  const PumpSpectrum& spectrum() const noexcept { return spectrum_; }
  const ConstantsTriple& constants() const noexcept { return constants_; }
  double poling_period() const noexcept { return crystal_.poling_period; }
  /// Residual k_p - k_s - k_i - 2 pi / period at the central frequencies.
  double delta_k() const noexcept { return delta_k_; }

  SpdcSetup with_focal_shifts(double z_pump, double z_signal, double z_idler) const;
  SpdcSetup with_waists(double w_pump, double w_signal, double w_idler) const;
  SpdcSetup with_spectrum(PumpSpectrum spectrum) const;

  /// Detuning for a signal filtered at the given vacuum wavelength. Under a
  /// CW pump the idler detuning is the exact negative.
  DetuningPair detuning_at_signal_wavelength(double wavelength) const;

  /// Throws DomainError when a CW pump is paired with Omega_i != -Omega_s.
  void check_detuning(const DetuningPair& d) const;

 private:
  CrystalConfig crystal_;
  ModelTriple models_;
  BeamGeometry pump_;
  BeamGeometry signal_;
  BeamGeometry idler_;
  PumpSpectrum spectrum_;
  ConstantsTriple constants_;
  double delta_k_ = 0.0;
};

/// Coefficient of z in the longitudinal phase, including delta_k().
double spectral_phase(const SpdcSetup& setup, const DetuningPair& d);

/// exp(-T0^2 (Omega_s + Omega_i)^2 / 4) for pulsed pumps, 1 for CW.
double pump_envelope(const SpdcSetup& setup, const DetuningPair& d);

/// Abbreviations of the closed form at one longitudinal position, SI units.
struct ClosedFormTerms {
  int h = 1;
  int b = 1;
  cdouble D;
  cdouble H;
  cdouble B;
};

ClosedFormTerms closed_form_terms(const SpdcSetup& setup, int l_abs, int j_s, int j_i, double z);

/// Longitudinal integral of exp(i z phi) D^|l| / (H^h B^b) 2F1~(h, b; 1+|l|; D^2/(HB))
/// for one (j_s, j_i) term, SI units.
QuadratureResult z_integral(const SpdcSetup& setup, const LGIndex& signal_mode,
                            const LGIndex& idler_mode, int j_s, int j_i,
                            const DetuningPair& detuning, const QuadratureOptions& options = {});

struct AmplitudeResult {
  cdouble value;
  std::size_t quadrature_nodes = 0;
  int max_series_terms = 0;
};

/// Detuning-independent part of the closed form,
///
///   K(z) = sum_{j_s, j_i} T*_s T*_i Gamma(h) Gamma(b) D^|l| / (H^h B^b) 2F1~(...),
///
/// tabulated lazily on each Gauss-Legendre level. evaluate() reuses the table
/// for any number of detunings. Copies share the table; thread-safe.
class OverlapKernel {
 public:
  OverlapKernel(const SpdcSetup& setup, const LGIndex& signal_mode, const LGIndex& idler_mode,
                const QuadratureOptions& options = {});

  /// True when the OAM selection rule forces the amplitude to zero.
  bool vanishes() const noexcept { return vanishes_; }
  AmplitudeResult evaluate(const DetuningPair& detuning) const;
  const SpdcSetup& setup() const noexcept { return *setup_; }

 private:
  struct Level {
    std::once_flag once;
    std::vector<cdouble> values;
    int max_terms = 0;
  };
  static constexpr std::size_t kLevels = 12;

  const Level& level(std::size_t index) const;
  void fill(Level& level, std::size_t nodes) const;

  std::shared_ptr<const SpdcSetup> setup_;
  LGIndex signal_mode_;
  LGIndex idler_mode_;
  QuadratureOptions options_;
  bool vanishes_ = false;
  double scale_ = 1.0;    // transverse length unit (pump waist)
  double prefactor_ = 0;  // w_p / sqrt(2 pi) * pi^2 / scale^2
  std::shared_ptr<std::array<Level, kLevels>> levels_;
};

AmplitudeResult overlap_amplitude(const SpdcSetup& setup, const LGIndex& signal_mode,
                                  const LGIndex& idler_mode, const DetuningPair& detuning);

double coupling_probability(const SpdcSetup& setup, const LGIndex& signal_mode,
                            const LGIndex& idler_mode, const DetuningPair& detuning);

}  // namespace spdc
