#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "spdc/analysis.hpp"
#include "spdc/error.hpp"

namespace spdc {
namespace {

std::vector<double> axis(double start, double stop, int count) {
  std::vector<double> v(count);
  for (int k = 0; k < count; ++k) {
    v[k] = count == 1 ? start : (k + 1 == count ? stop : start + (stop - start) * k / (count - 1));
  }
  return v;
}

void check_axis(const char* name, double start, double stop, int count) {
  if (count < 2 || !(start < stop) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw DomainError(std::string("JSA ") + name + " axis needs >= 2 points and start < stop");
  }
}

void check_resolution(const JsaGridSpec& spec, double t0) {
  const double need = 4.0 / t0;
  const double step_limit = (2.0 / t0) / 8.0;
  auto check = [&](const char* name, double start, double stop, int count) {
    if (start > -need || stop < need) {
      std::ostringstream os;
      os << "JSA " << name << " axis must span +-4/T0 = +-" << need << " rad/s";
      throw DomainError(os.str());
    }
    const double step = (stop - start) / (count - 1);
    if (step > step_limit * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "JSA " << name << " axis step " << step
         << " rad/s does not resolve the pump envelope (limit " << step_limit << ")";
      throw DomainError(os.str());
    }
  };
  check("signal", spec.signal_start, spec.signal_stop, spec.signal_count);
  check("idler", spec.idler_start, spec.idler_stop, spec.idler_count);
}

}  // namespace

JsaGridSpec JsaGridSpec::symmetric(double half_span, int count) {
  return {-half_span, half_span, count, -half_span, half_span, count};
}

void JsaGridSpec::validate() const {
  check_axis("signal", signal_start, signal_stop, signal_count);
  check_axis("idler", idler_start, idler_stop, idler_count);
}

std::vector<double> JsaGridSpec::signal_axis() const {
  validate();
  return axis(signal_start, signal_stop, signal_count);
}

std::vector<double> JsaGridSpec::idler_axis() const {
  validate();
  return axis(idler_start, idler_stop, idler_count);
}

JsaGrid jsa_grid(const SpdcSetup& setup, const JsaGridSpec& spec, const ExecutionPolicy& policy) {
  if (setup.spectrum().is_cw()) throw DomainError("JSA grid requires a pulsed pump");
  spec.validate();
  check_resolution(spec, setup.spectrum().pulse_duration);
  JsaGrid g;
  g.omega_s = spec.signal_axis();
  g.omega_i = spec.idler_axis();
  const Eigen::Index ns = static_cast<Eigen::Index>(g.omega_s.size());
  const Eigen::Index ni = static_cast<Eigen::Index>(g.omega_i.size());
  g.values.resize(ns, ni);
  const OverlapKernel kernel(setup, {0, 0}, {0, 0});
  parallel_for(static_cast<std::size_t>(ns), policy, [&](std::size_t r) {
    for (Eigen::Index c = 0; c < ni; ++c) {
      g.values(static_cast<Eigen::Index>(r), c) =
          kernel.evaluate({g.omega_s[r], g.omega_i[c]}).value;
    }
  });
  return g;
}

double schmidt_purity(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) throw NumericalError("purity of an empty matrix is undefined");
  Eigen::Index pr = 0, pc = 0;
  const double scale = m.cwiseAbs().maxCoeff(&pr, &pc);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw NumericalError("purity undefined: joint amplitude is zero or not finite");
  }
  // Rotate the largest entry onto the positive real axis and scale it to one.
  // Power-of-two scales, sign flips and factors of i then give identical input.
  const cdouble unit = std::conj(m(pr, pc)) / scale;
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(m * (unit / scale));
  const Eigen::VectorXd s2 = svd.singularValues().array().square();
  const double total = s2.sum();
  return s2.squaredNorm() / (total * total);
}

double smf_spectral_purity(const JsaGrid& jsa) { return schmidt_purity(jsa.values); }

double truncated_signal_purity(const SpdcSetup& setup, const std::vector<LGIndex>& modes,
                               const JsaGridSpec& spec, const ExecutionPolicy& policy) {
  if (modes.empty()) throw DomainError("truncated purity needs at least one mode");
  if (setup.spectrum().is_cw()) throw DomainError("truncated purity requires a pulsed pump");
  const std::vector<double> os = spec.signal_axis();
  const std::vector<double> oi = spec.idler_axis();
  const Eigen::Index ns = static_cast<Eigen::Index>(os.size());
  const Eigen::Index ni = static_cast<Eigen::Index>(oi.size());
  const std::size_t nm = modes.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(nm * ns, nm * ni);
  std::vector<std::size_t> pairs;
  for (std::size_t k = 0; k < nm * nm; ++k) {
    if (modes[k / nm].l + modes[k % nm].l == 0) pairs.push_back(k);
  }
  parallel_for(pairs.size(), policy, [&](std::size_t j) {
    const std::size_t a = pairs[j] / nm;
    const std::size_t b = pairs[j] % nm;
    const OverlapKernel kernel(setup, modes[a], modes[b]);
    for (Eigen::Index r = 0; r < ns; ++r)
      for (Eigen::Index c = 0; c < ni; ++c)
        m(static_cast<Eigen::Index>(a) * ns + r, static_cast<Eigen::Index>(b) * ni + c) =
            kernel.evaluate({os[r], oi[c]}).value;
  });
  return schmidt_purity(m);
}

PurityMap purity_map(const SpdcSetup& setup, const ScanAxis& z_p, const ScanAxis& z_si,
                     const JsaGridSpec& spec, const ExecutionPolicy& policy) {
  PurityMap p;
  p.z_p = z_p.values();
  p.z_si = z_si.values();
  const std::size_t nc = p.z_si.size();
  p.purity.assign(p.z_p.size() * nc, 0.0);
  // Points run concurrently; each JSA is filled sequentially.
  parallel_for(p.purity.size(), policy, [&](std::size_t k) {
    const SpdcSetup s = setup.with_focal_shifts(p.z_p[k / nc], p.z_si[k % nc], p.z_si[k % nc]);
    p.purity[k] = smf_spectral_purity(jsa_grid(s, spec, ExecutionPolicy{1}));
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < p.purity.size(); ++k)
    if (p.purity[k] > p.purity[best]) best = k;
  p.optimum.location = {p.z_p[best / nc], p.z_si[best % nc]};
  p.optimum.value = p.purity[best];
  p.optimum.refined = false;
  return p;
}

}  // namespace spdc
