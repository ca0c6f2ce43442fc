#include "spdc/amplitude.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "spdc/error.hpp"
#include "spdc/specfun.hpp"

namespace spdc {
namespace {

cdouble int_power(cdouble x, int n) {
  cdouble r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

// D, H, B divided by unit^2.
struct ScaledTerms {
  cdouble D;
  cdouble H;
  cdouble B;
};

ScaledTerms scaled_terms(const SpdcSetup& s, double unit, double z) {
  const auto& c = s.constants();
  const double u2 = unit * unit;
  const double wp = s.pump().waist / unit;
  const double ws = s.signal().waist / unit;
  const double wi = s.idler().waist / unit;
  const double ap = (z + s.pump().focal_shift) / c.pump.k / u2;
  const double as = (z + s.signal().focal_shift) / c.signal.k / u2;
  const double ai = (z + s.idler().focal_shift) / c.idler.k / u2;
  ScaledTerms t;
  t.D = {-0.25 * wp * wp, -0.5 * ap};
  t.H = {0.25 * (wp * wp + ws * ws), 0.5 * (ap - as)};
  t.B = {0.25 * (wp * wp + wi * wi), 0.5 * (ap - ai)};
  return t;
}

struct TermValue {
  cdouble value;
  int terms = 0;
};

// Gamma(h) Gamma(b) D^nu / (H^h B^b) 2F1~(h, b; 1+nu; D^2/(HB)) in scaled units.
TermValue term_value(const ScaledTerms& t, int nu, int j_s, int j_i, double z) {
  const int h = 1 + j_s + nu;
  const int b = 1 + j_i + nu;
  const cdouble x = t.D * t.D / (t.H * t.B);
  Hyp2f1Result f;
  auto context = [&] {
    std::ostringstream os;
    os << " [j_s=" << j_s << ", j_i=" << j_i << ", z=" << z << " m]";
    return os.str();
  };
  try {
    f = hyp2f1_regularized(h, b, 1.0 + nu, x);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(e.what() + context());
  } catch (const DomainError& e) {
    throw DomainError(e.what() + context());
  }
  const double gammas = std::exp(log_factorial(h - 1) + log_factorial(b - 1));
  return {gammas * int_power(t.D, nu) / (int_power(t.H, h) * int_power(t.B, b)) * f.value,
          f.diagnostics.terms_used};
}

void check_finite(cdouble v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw NumericalError(std::string(what) + " is not finite");
  }
}

}  // namespace

void PumpSpectrum::validate() const {
  if (kind == SpectrumKind::pulsed_gaussian &&
      (!(pulse_duration > 0.0) || !std::isfinite(pulse_duration))) {
    throw DomainError("pulsed pump requires a positive pulse duration");
  }
}

SpdcSetup::SpdcSetup(CrystalConfig crystal, ModelTriple models, BeamGeometry pump,
                     BeamGeometry signal, BeamGeometry idler, PumpSpectrum spectrum)
    : crystal_(crystal),
      models_(std::move(models)),
      pump_(pump),
      signal_(signal),
      idler_(idler),
      spectrum_(spectrum) {
  crystal_.validate();
  models_.pump.validate();
  models_.signal.validate();
  models_.idler.validate();
  pump_.validate("pump");
  signal_.validate("signal");
  idler_.validate("idler");
  spectrum_.validate();
  constants_.pump = optical_constants(models_.pump, crystal_.pump_wavelength);
  constants_.signal = optical_constants(models_.signal, crystal_.signal_wavelength);
  constants_.idler = optical_constants(models_.idler, crystal_.idler_wavelength);
  if (!crystal_.has_poling_period()) crystal_.poling_period = solve_poling_period(crystal_, models_);
  delta_k_ = phase_mismatch(constants_, crystal_.poling_period);
}

SpdcSetup SpdcSetup::with_focal_shifts(double z_pump, double z_signal, double z_idler) const {
  SpdcSetup s = *this;
  s.pump_.focal_shift = z_pump;
  s.signal_.focal_shift = z_signal;
  s.idler_.focal_shift = z_idler;
  s.pump_.validate("pump");
  s.signal_.validate("signal");
  s.idler_.validate("idler");
  return s;
}

SpdcSetup SpdcSetup::with_waists(double w_pump, double w_signal, double w_idler) const {
  SpdcSetup s = *this;
  s.pump_.waist = w_pump;
  s.signal_.waist = w_signal;
  s.idler_.waist = w_idler;
  s.pump_.validate("pump");
  s.signal_.validate("signal");
  s.idler_.validate("idler");
  return s;
}

SpdcSetup SpdcSetup::with_spectrum(PumpSpectrum spectrum) const {
  spectrum.validate();
  SpdcSetup s = *this;
  s.spectrum_ = spectrum;
  return s;
}

DetuningPair SpdcSetup::detuning_at_signal_wavelength(double wavelength) const {
  if (!(wavelength > 0.0)) throw DomainError("signal wavelength must be positive");
  const double omega = angular_frequency(wavelength) - angular_frequency(crystal_.signal_wavelength);
  return {omega, -omega};
}

void SpdcSetup::check_detuning(const DetuningPair& d) const {
  if (!std::isfinite(d.signal) || !std::isfinite(d.idler)) {
    throw DomainError("detuning must be finite");
  }
  if (spectrum_.is_cw() &&
      std::abs(d.signal + d.idler) > 1e-12 * (std::abs(d.signal) + std::abs(d.idler))) {
    throw DomainError("continuous-wave pump requires Omega_i = -Omega_s");
  }
}

double spectral_phase(const SpdcSetup& setup, const DetuningPair& d) {
  const auto& c = setup.constants();
  const double sum = d.signal + d.idler;
  return setup.delta_k() + sum * c.pump.inv_u - d.signal * c.signal.inv_u -
         d.idler * c.idler.inv_u + 0.5 * c.pump.gvd * sum * sum -
         0.5 * c.signal.gvd * d.signal * d.signal - 0.5 * c.idler.gvd * d.idler * d.idler;
}

double pump_envelope(const SpdcSetup& setup, const DetuningPair& d) {
  if (setup.spectrum().is_cw()) return 1.0;
  const double t0 = setup.spectrum().pulse_duration;
  const double sum = d.signal + d.idler;
  return std::exp(-0.25 * t0 * t0 * sum * sum);
}

ClosedFormTerms closed_form_terms(const SpdcSetup& setup, int l_abs, int j_s, int j_i, double z) {
  if (l_abs < 0 || j_s < 0 || j_i < 0) throw DomainError("closed_form_terms indices must be >= 0");
  const ScaledTerms t = scaled_terms(setup, 1.0, z);
  return {1 + j_s + l_abs, 1 + j_i + l_abs, t.D, t.H, t.B};
}

QuadratureResult z_integral(const SpdcSetup& setup, const LGIndex& signal_mode,
                            const LGIndex& idler_mode, int j_s, int j_i,
                            const DetuningPair& detuning, const QuadratureOptions& options) {
  if (j_s < 0 || j_s > signal_mode.p || j_i < 0 || j_i > idler_mode.p) {
    throw DomainError("z_integral term indices out of range");
  }
  setup.check_detuning(detuning);
  const int nu = std::abs(idler_mode.l);
  const double unit = setup.pump().waist;
  const double phi = spectral_phase(setup, detuning);
  const double half = 0.5 * setup.crystal().length;
  auto f = [&](double z) {
    const TermValue v = term_value(scaled_terms(setup, unit, z), nu, j_s, j_i, z);
    const double gammas = std::exp(log_factorial(nu + j_s) + log_factorial(nu + j_i));
    return v.value / gammas * std::polar(1.0, z * phi);
  };
  QuadratureResult r = integrate_adaptive(f, -half, half, options);
  // Undo the unit: D^nu / (H^h B^b) scales as unit^(2 nu - 2h - 2b).
  const int power = 2 * nu - 2 * (1 + j_s + nu) - 2 * (1 + j_i + nu);
  r.value *= std::pow(unit, power);
  check_finite(r.value, "z integral");
  return r;
}

OverlapKernel::OverlapKernel(const SpdcSetup& setup, const LGIndex& signal_mode,
                             const LGIndex& idler_mode, const QuadratureOptions& options)
    : setup_(std::make_shared<const SpdcSetup>(setup)),
      signal_mode_(signal_mode),
      idler_mode_(idler_mode),
      options_(options),
      levels_(std::make_shared<std::array<Level, kLevels>>()) {
  if (signal_mode.p < 0 || idler_mode.p < 0) throw DomainError("negative radial number");
  if (options.initial_nodes == 0 || (options.max_nodes / options.initial_nodes) >= (1u << kLevels)) {
    throw DomainError("quadrature node range exceeds the kernel's level table");
  }
  vanishes_ = signal_mode.l + idler_mode.l != 0;
  scale_ = setup.pump().waist;
  prefactor_ = setup.pump().waist / std::sqrt(2.0 * kPi) * kPi * kPi / (scale_ * scale_);
}

void OverlapKernel::fill(Level& lv, std::size_t nodes) const {
  const GaussLegendreRule& rule = gauss_legendre(nodes);
  const double half = 0.5 * setup_->crystal().length;
  const int nu = std::abs(idler_mode_.l);
  const double ws = setup_->signal().waist / scale_;
  const double wi = setup_->idler().waist / scale_;

  std::vector<cdouble> ts(signal_mode_.p + 1);
  std::vector<cdouble> ti(idler_mode_.p + 1);
  for (int j = 0; j <= signal_mode_.p; ++j)
    ts[j] = std::conj(t_coefficient_scaled(signal_mode_.p, signal_mode_.l, j, ws));
  for (int j = 0; j <= idler_mode_.p; ++j)
    ti[j] = std::conj(t_coefficient_scaled(idler_mode_.p, idler_mode_.l, j, wi));

  lv.values.resize(nodes);
  for (std::size_t n = 0; n < nodes; ++n) {
    const double z = half * rule.nodes[n];
    const ScaledTerms t = scaled_terms(*setup_, scale_, z);
    cdouble sum = 0.0;
    for (int js = 0; js <= signal_mode_.p; ++js) {
      for (int ji = 0; ji <= idler_mode_.p; ++ji) {
        const TermValue v = term_value(t, nu, js, ji, z);
        lv.max_terms = std::max(lv.max_terms, v.terms);
        sum += ts[js] * ti[ji] * v.value;
      }
    }
    check_finite(sum, "overlap kernel");
    lv.values[n] = sum;
  }
}

const OverlapKernel::Level& OverlapKernel::level(std::size_t index) const {
  Level& lv = (*levels_)[index];
  std::call_once(lv.once, [&] { fill(lv, options_.initial_nodes << index); });
  return lv;
}

AmplitudeResult OverlapKernel::evaluate(const DetuningPair& detuning) const {
  setup_->check_detuning(detuning);
  if (vanishes_) return {};
  const double phi = spectral_phase(*setup_, detuning);
  const double half = 0.5 * setup_->crystal().length;

  auto integrate = [&](std::size_t index, double& l1, int& terms) {
    const Level& lv = level(index);
    const GaussLegendreRule& rule = gauss_legendre(options_.initial_nodes << index);
    cdouble sum = 0.0;
    double abs_sum = 0.0;
    for (std::size_t n = 0; n < lv.values.size(); ++n) {
      const cdouble v = lv.values[n] * std::polar(1.0, half * rule.nodes[n] * phi);
      sum += rule.weights[n] * v;
      abs_sum += rule.weights[n] * std::abs(v);
    }
    l1 = half * abs_sum;
    terms = std::max(terms, lv.max_terms);
    return half * sum;
  };

  int terms = 0;
  double l1 = 0.0;
  std::size_t index = 0;
  cdouble previous = integrate(index, l1, terms);
  while ((options_.initial_nodes << index) < options_.max_nodes) {
    ++index;
    const cdouble current = integrate(index, l1, terms);
    if (quadrature_agrees(previous, current, l1, options_)) {
      AmplitudeResult r;
      r.value = pump_envelope(*setup_, detuning) * prefactor_ * current;
      r.quadrature_nodes = options_.initial_nodes << index;
      r.max_series_terms = terms;
      check_finite(r.value, "overlap amplitude");
      return r;
    }
    if ((options_.initial_nodes << index) >= options_.max_nodes) {
      std::ostringstream os;
      os << "overlap z-integral did not converge by " << (options_.initial_nodes << index)
         << " nodes (last two estimates " << previous << ", " << current << ")";
      throw QuadratureError(os.str(), previous, current);
    }
    previous = current;
  }
  throw QuadratureError("quadrature max_nodes must exceed initial_nodes", previous, previous);
}

AmplitudeResult overlap_amplitude(const SpdcSetup& setup, const LGIndex& signal_mode,
                                  const LGIndex& idler_mode, const DetuningPair& detuning) {
  setup.check_detuning(detuning);
  if (signal_mode.l + idler_mode.l != 0) return {};
  return OverlapKernel(setup, signal_mode, idler_mode).evaluate(detuning);
}

double coupling_probability(const SpdcSetup& setup, const LGIndex& signal_mode,
                            const LGIndex& idler_mode, const DetuningPair& detuning) {
  return std::norm(overlap_amplitude(setup, signal_mode, idler_mode, detuning).value);
}

}  // namespace spdc
