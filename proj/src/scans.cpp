#include <algorithm>
#include <cmath>

#include "spdc/analysis.hpp"
#include "spdc/error.hpp"

namespace spdc {
namespace {

struct Parabola {
  double offset = 0.0;  // in units of the grid step
  double gain = 0.0;    // vertex value minus the centre sample
};

// Vertex of the parabola through three equally spaced samples.
Parabola parabola(double ym, double y0, double yp) {
  const double curvature = ym - 2.0 * y0 + yp;
  if (!(curvature < 0.0)) return {};
  const double offset = 0.5 * (ym - yp) / curvature;
  if (std::abs(offset) > 1.0) return {};
  return {offset, -0.125 * (ym - yp) * (ym - yp) / curvature};
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Optimum along one axis of samples y at positions x (uniform).
void refine_axis(const std::vector<double>& x, std::size_t i,
                 const std::function<double(std::size_t)>& y, double& location, double& gain,
                 bool& refined) {
  location = x[i];
  gain = 0.0;
  if (i == 0 || i + 1 >= x.size()) {
    refined = refined && x.size() == 1;
    return;
  }
  const Parabola p = parabola(y(i - 1), y(i), y(i + 1));
  location = x[i] + p.offset * (x[i + 1] - x[i]);
  gain = p.gain;
}

}  // namespace

const char* to_string(ScanVariable v) {
  switch (v) {
    case ScanVariable::z_p: return "z_p";
    case ScanVariable::z_s: return "z_s";
    case ScanVariable::z_i: return "z_i";
    case ScanVariable::z_si: return "z_si";
    case ScanVariable::lambda_s: return "lambda_s";
  }
  return "?";
}

ScanVariable parse_scan_variable(const std::string& name) {
  for (ScanVariable v : {ScanVariable::z_p, ScanVariable::z_s, ScanVariable::z_i,
                         ScanVariable::z_si, ScanVariable::lambda_s}) {
    if (name == to_string(v)) return v;
  }
  throw DomainError("unknown scan variable '" + name + "'");
}

void ScanAxis::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop)) {
    throw DomainError(std::string("scan axis ") + to_string(variable) + " has non-finite bounds");
  }
  if (count == 1 && start == stop) return;
  if (count < 2) {
    throw DomainError(std::string("scan axis ") + to_string(variable) +
                      " needs at least 2 points");
  }
  if (!(start < stop)) {
    throw DomainError(std::string("scan axis ") + to_string(variable) +
                      " needs start < stop");
  }
}

std::vector<double> ScanAxis::values() const {
  validate();
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = start;
    return v;
  }
  const double step = (stop - start) / (count - 1);
  for (int k = 0; k < count; ++k) v[k] = start + k * step;
  v.back() = stop;
  return v;
}

SpdcSetup apply_shift(const SpdcSetup& setup, ScanVariable v, double value) {
  const double zp = setup.pump().focal_shift;
  const double zs = setup.signal().focal_shift;
  const double zi = setup.idler().focal_shift;
  switch (v) {
    case ScanVariable::z_p: return setup.with_focal_shifts(value, zs, zi);
    case ScanVariable::z_s: return setup.with_focal_shifts(zp, value, zi);
    case ScanVariable::z_i: return setup.with_focal_shifts(zp, zs, value);
    case ScanVariable::z_si: return setup.with_focal_shifts(zp, value, value);
    case ScanVariable::lambda_s: break;
  }
  throw DomainError("lambda_s is not a focal shift");
}

std::vector<double> normalize_by_max(std::vector<double> values) {
  if (values.empty()) return values;
  const double m = *std::max_element(values.begin(), values.end());
  if (m > 0.0) {
    for (double& v : values) v /= m;
  }
  return values;
}

EfficiencyMap efficiency_map(const SpdcSetup& setup, const ScanAxis& z_s, const ScanAxis& z_i,
                             const ModePair& modes, const DetuningPair& detuning,
                             const ExecutionPolicy& policy) {
  EfficiencyMap m;
  m.z_s = z_s.values();
  m.z_i = z_i.values();
  const std::size_t ns = m.z_s.size();
  const std::size_t ni = m.z_i.size();
  m.probability.assign(ns * ni, 0.0);
  parallel_for(ns * ni, policy, [&](std::size_t k) {
    const SpdcSetup s =
        setup.with_focal_shifts(setup.pump().focal_shift, m.z_s[k / ni], m.z_i[k % ni]);
    m.probability[k] = coupling_probability(s, modes.signal, modes.idler, detuning);
  });
  m.normalized = normalize_by_max(m.probability);

  const std::size_t best = argmax(m.probability);
  const std::size_t r = best / ni;
  const std::size_t c = best % ni;
  double zs = 0.0, zi = 0.0, gs = 0.0, gi = 0.0;
  bool refined = true;
  refine_axis(m.z_s, r, [&](std::size_t k) { return m.probability[k * ni + c]; }, zs, gs,
              refined);
  refine_axis(m.z_i, c, [&](std::size_t k) { return m.probability[r * ni + k]; }, zi, gi,
              refined);
  m.optimum.location = {zs, zi};
  m.optimum.value = m.probability[best] + std::max(0.0, gs) + std::max(0.0, gi);
  m.optimum.refined = refined;
  return m;
}

std::optional<double> full_width_half_max(const std::vector<double>& x,
                                          const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) return std::nullopt;
  const std::size_t peak = argmax(y);
  const double half = 0.5 * y[peak];
  if (!(half > 0.0)) return std::nullopt;
  auto cross = [&](std::size_t a, std::size_t b) {
    return x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a]);
  };
  std::optional<double> left, right;
  for (std::size_t k = peak; k > 0; --k) {
    if (y[k - 1] < half) {
      left = cross(k - 1, k);
      break;
    }
  }
  for (std::size_t k = peak; k + 1 < y.size(); ++k) {
    if (y[k + 1] < half) {
      right = cross(k, k + 1);
      break;
    }
  }
  if (!left || !right) return std::nullopt;
  return *right - *left;
}

FocusScan pump_focus_scan(const SpdcSetup& setup, const ScanAxis& z_p, const ModePair& modes,
                          const DetuningPair& detuning, const ExecutionPolicy& policy) {
  FocusScan f;
  f.z_p = z_p.values();
  f.probability.assign(f.z_p.size(), 0.0);
  parallel_for(f.z_p.size(), policy, [&](std::size_t k) {
    const SpdcSetup s = apply_shift(setup, ScanVariable::z_p, f.z_p[k]);
    f.probability[k] = coupling_probability(s, modes.signal, modes.idler, detuning);
  });
  f.normalized = normalize_by_max(f.probability);
  f.fwhm = full_width_half_max(f.z_p, f.probability);
  return f;
}

SpectralResponse spectral_response(const SpdcSetup& setup, const ModePair& modes,
                                   const ScanAxis& wavelength, const ExecutionPolicy& policy) {
  if (!setup.spectrum().is_cw()) throw DomainError("spectral response requires a CW pump");
  SpectralResponse r;
  r.wavelength = wavelength.values();
  r.probability.assign(r.wavelength.size(), 0.0);
  const OverlapKernel kernel(setup, modes.signal, modes.idler);
  parallel_for(r.wavelength.size(), policy, [&](std::size_t k) {
    const DetuningPair d = setup.detuning_at_signal_wavelength(r.wavelength[k]);
    r.probability[k] = std::norm(kernel.evaluate(d).value);
  });
  r.normalized = normalize_by_max(r.probability);
  const std::size_t best = argmax(r.probability);
  double loc = 0.0, gain = 0.0;
  bool refined = true;
  refine_axis(r.wavelength, best, [&](std::size_t k) { return r.probability[k]; }, loc, gain,
              refined);
  r.peak_wavelength = loc;
  r.peak_value = r.probability[best] + std::max(0.0, gain);
  return r;
}

ModeTable mode_distribution(const SpdcSetup& setup, int max_p, int max_l,
                            const DetuningPair& detuning, const ExecutionPolicy& policy) {
  setup.check_detuning(detuning);
  ModeTable t;
  t.modes = mode_block(max_p, max_l);
  const std::size_t n = t.modes.size();
  t.probability.assign(n * n, 0.0);
  std::vector<std::size_t> allowed;
  for (std::size_t k = 0; k < n * n; ++k) {
    if (t.modes[k / n].l + t.modes[k % n].l == 0) allowed.push_back(k);
  }
  parallel_for(allowed.size(), policy, [&](std::size_t j) {
    const std::size_t k = allowed[j];
    t.probability[k] = coupling_probability(setup, t.modes[k / n], t.modes[k % n], detuning);
  });
  return t;
}

}  // namespace spdc
