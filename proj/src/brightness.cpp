#include <algorithm>
#include <cmath>

#include "spdc/analysis.hpp"
#include "spdc/error.hpp"

namespace spdc {

ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double a,
                                      double b, double tol) {
  if (!(a <= b)) throw DomainError("golden section needs a <= b");
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? ScalarOptimum{x1, f1, false, f1} : ScalarOptimum{x2, f2, false, f2};
}

ScalarOptimum bracketed_maximize(const std::function<double(double)>& f, double lo, double hi,
                                 int points, double tol) {
  if (points < 3 || !(lo < hi)) throw DomainError("bracket needs >= 3 points and lo < hi");
  std::vector<double> x(points);
  std::vector<double> y(points);
  for (int k = 0; k < points; ++k) {
    x[k] = k + 1 == points ? hi : lo + (hi - lo) * k / (points - 1);
    y[k] = f(x[k]);
  }
  const int best = static_cast<int>(std::max_element(y.begin(), y.end()) - y.begin());
  ScalarOptimum out{x[best], y[best], best == 0 || best + 1 == points, y[best]};
  const double a = x[std::max(best - 1, 0)];
  const double b = x[std::min(best + 1, points - 1)];
  const ScalarOptimum g = golden_section_maximize(f, a, b, tol);
  if (g.value > out.value) {
    out.x = g.x;
    out.value = g.value;
  }
  return out;
}

Brightness spectral_brightness(const SpdcSetup& setup, const ModePair& modes,
                               const BrightnessOptions& options) {
  if (!setup.spectrum().is_cw()) throw DomainError("spectral brightness requires a CW pump");
  if (options.points < 201) throw DomainError("brightness band needs at least 201 points");
  const OverlapKernel kernel(setup, modes.signal, modes.idler);
  auto f = [&](double wavelength) {
    return std::norm(kernel.evaluate(setup.detuning_at_signal_wavelength(wavelength)).value);
  };
  const ScalarOptimum o = bracketed_maximize(f, options.band_start, options.band_stop,
                                             options.points, options.tolerance);
  return {o.value, o.x, o.coarse_value, o.on_edge};
}

double focus_objective(const SpdcSetup& setup, const ModePair& modes,
                       const FocusObjective& objective) {
  if (objective.kind == FocusObjective::Kind::brightness) {
    return spectral_brightness(setup, modes, objective.brightness).peak_value;
  }
  const DetuningPair d = setup.detuning_at_signal_wavelength(objective.wavelength);
  return coupling_probability(setup, modes.signal, modes.idler, d);
}

std::vector<FocusPoint> optimal_signal_focus(const SpdcSetup& setup,
                                             const std::vector<double>& z_p,
                                             const ModePair& modes,
                                             const FocusObjective& objective,
                                             const FocusSearch& search,
                                             const ExecutionPolicy& policy) {
  std::vector<FocusPoint> out(z_p.size());
  parallel_for(z_p.size(), policy, [&](std::size_t k) {
    FocusPoint& pt = out[k];
    pt.z_p = z_p[k];
    try {
      auto f = [&](double z) {
        return focus_objective(setup.with_focal_shifts(z_p[k], z, z), modes, objective);
      };
      const ScalarOptimum o =
          bracketed_maximize(f, search.start, search.stop, search.points, search.tolerance);
      pt.z_s_max = o.x;
      pt.value = o.value;
      pt.ok = !o.on_edge;
      pt.status = o.on_edge ? "maximum at search edge" : "ok";
    } catch (const Error& e) {
      pt.ok = false;
      pt.status = e.what();
    }
  });
  double peak = 0.0;
  for (const auto& p : out) peak = std::max(peak, p.value);
  for (auto& p : out) p.normalized = peak > 0.0 ? p.value / peak : 0.0;
  return out;
}

FocusPairOptimum optimal_focus_pair(const SpdcSetup& setup, const ModePair& modes,
                                    const FocusObjective& objective, const FocusSearch& search) {
  const double zp = setup.pump().focal_shift;
  auto locked = [&](double z) {
    return focus_objective(setup.with_focal_shifts(zp, z, z), modes, objective);
  };
  const ScalarOptimum start =
      bracketed_maximize(locked, search.start, search.stop, search.points, search.tolerance);
  FocusPairOptimum best{start.x, start.x, start.value};
  const double window = (search.stop - search.start) / (search.points - 1);
  for (int iter = 0; iter < 50; ++iter) {
    const FocusPairOptimum before = best;
    auto along_s = [&](double z) {
      return focus_objective(setup.with_focal_shifts(zp, z, best.z_i), modes, objective);
    };
    ScalarOptimum o = golden_section_maximize(along_s, best.z_s - window, best.z_s + window,
                                              0.1 * search.tolerance);
    if (o.value > best.value) {
      best.z_s = o.x;
      best.value = o.value;
    }
    auto along_i = [&](double z) {
      return focus_objective(setup.with_focal_shifts(zp, best.z_s, z), modes, objective);
    };
    o = golden_section_maximize(along_i, best.z_i - window, best.z_i + window,
                                0.1 * search.tolerance);
    if (o.value > best.value) {
      best.z_i = o.x;
      best.value = o.value;
    }
    if (std::abs(best.z_s - before.z_s) < 0.1 * search.tolerance &&
        std::abs(best.z_i - before.z_i) < 0.1 * search.tolerance) {
      break;
    }
  }
  return best;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("linear fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("linear fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace spdc
