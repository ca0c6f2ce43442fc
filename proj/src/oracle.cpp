#include "spdc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spdc/error.hpp"

namespace spdc {
namespace {

double min_waist(const SpdcSetup& s) {
  return std::min({s.pump().waist, s.signal().waist, s.idler().waist});
}

// Longitudinal phase exp(i (alpha z + beta)) of the mode function.
struct PhaseCoefficients {
  double alpha;
  double beta;
};

PhaseCoefficients phase_coefficients(const SpdcSetup& s, double qs2, double qi2, double qp2,
                                     double phi) {
  const auto& c = s.constants();
  const double fp = qp2 / (2.0 * c.pump.k);
  const double fs = qs2 / (2.0 * c.signal.k);
  const double fi = qi2 / (2.0 * c.idler.k);
  return {phi - fp + fs + fi,
          -fp * s.pump().focal_shift + fs * s.signal().focal_shift + fi * s.idler().focal_shift};
}

cdouble longitudinal_integral(const SpdcSetup& s, const PhaseCoefficients& pc,
                              const QuadratureOptions& options) {
  const double half = 0.5 * s.crystal().length;
  auto f = [&](double z) { return std::polar(1.0, pc.alpha * z + pc.beta); };
  return integrate_adaptive(f, -half, half, options).value;
}

double pump_profile(const SpdcSetup& s, double qp2) {
  const double wp = s.pump().waist;
  return wp / std::sqrt(2.0 * kPi) * std::exp(-0.25 * wp * wp * qp2);
}

}  // namespace

double OracleGrid::resolved_cutoff(const SpdcSetup& setup) const {
  return radial_cutoff > 0.0 ? radial_cutoff : 10.0 / min_waist(setup);
}

void OracleGrid::validate(const SpdcSetup& setup) const {
  if (radial_nodes < 8 || azimuthal_nodes < 8 || z_nodes < 8) {
    throw DomainError("oracle grid node counts must be >= 8");
  }
  if (radial_cutoff < 0.0 || !std::isfinite(radial_cutoff)) {
    throw DomainError("oracle radial cutoff must be finite and non-negative");
  }
  if (resolved_cutoff(setup) < 6.0 / min_waist(setup)) {
    throw DomainError("oracle radial cutoff must be at least 6 / (smallest waist)");
  }
}

OracleGrid OracleGrid::doubled() const {
  OracleGrid g = *this;
  g.radial_nodes *= 2;
  g.azimuthal_nodes *= 2;
  g.z_nodes *= 2;
  return g;
}

cdouble mode_function(const SpdcSetup& setup, TransverseMomentum q_s, TransverseMomentum q_i,
                      const DetuningPair& detuning, const QuadratureOptions& options) {
  setup.check_detuning(detuning);
  const auto& c = setup.constants();
  const double qs2 = q_s.x * q_s.x + q_s.y * q_s.y;
  const double qi2 = q_i.x * q_i.x + q_i.y * q_i.y;
  const double px = q_s.x + q_i.x;
  const double py = q_s.y + q_i.y;
  const double qp2 = px * px + py * py;
  if (std::sqrt(qs2) >= 0.2 * c.signal.k || std::sqrt(qi2) >= 0.2 * c.idler.k ||
      std::sqrt(qp2) >= 0.2 * c.pump.k) {
    throw DomainError("transverse momentum outside the paraxial bound |q| < 0.2 k");
  }
  const PhaseCoefficients pc =
      phase_coefficients(setup, qs2, qi2, qp2, spectral_phase(setup, detuning));
  return pump_profile(setup, qp2) * pump_envelope(setup, detuning) *
         longitudinal_integral(setup, pc, options);
}

std::vector<cdouble> project_on_grid(const SpdcSetup& setup,
                                     const std::vector<LGIndex>& signal_modes,
                                     const std::vector<LGIndex>& idler_modes,
                                     const DetuningPair& detuning, const OracleGrid& grid,
                                     const ExecutionPolicy& policy) {
  grid.validate(setup);
  setup.check_detuning(detuning);
  const std::size_t ns = signal_modes.size();
  const std::size_t ni = idler_modes.size();
  const int nr = grid.radial_nodes;
  const int na = grid.azimuthal_nodes;
  const double cutoff = grid.resolved_cutoff(setup);
  const auto& kc = setup.constants();
  if (cutoff >= 0.2 * std::min(kc.signal.k, kc.idler.k) || 2.0 * cutoff >= 0.2 * kc.pump.k) {
    throw DomainError("oracle radial cutoff exceeds the paraxial bound |q| < 0.2 k");
  }
  const GaussLegendreRule& rule = gauss_legendre(static_cast<std::size_t>(nr));

  std::vector<double> rho(nr);
  std::vector<double> rw(nr);
  for (int r = 0; r < nr; ++r) {
    rho[r] = 0.5 * cutoff * (rule.nodes[r] + 1.0);
    rw[r] = 0.5 * cutoff * rule.weights[r] * rho[r];
  }
  std::vector<double> angle(na);
  for (int a = 0; a < na; ++a) angle[a] = 2.0 * kPi * a / na;
  const double aw = 2.0 * kPi / na;

  // conj(LG) sampled on the polar grid: [mode][r][a].
  auto sample = [&](const std::vector<LGIndex>& modes, double waist) {
    std::vector<cdouble> out(modes.size() * nr * na);
    for (std::size_t m = 0; m < modes.size(); ++m)
      for (int r = 0; r < nr; ++r)
        for (int a = 0; a < na; ++a)
          out[(m * nr + r) * na + a] = std::conj(lg_momentum_amplitude(
              modes[m], waist, rho[r] * std::cos(angle[a]), rho[r] * std::sin(angle[a])));
    return out;
  };
  const std::vector<cdouble> lgs = sample(signal_modes, setup.signal().waist);
  const std::vector<cdouble> lgi = sample(idler_modes, setup.idler().waist);

  QuadratureOptions zopt;
  zopt.initial_nodes = static_cast<std::size_t>(grid.z_nodes);
  zopt.max_nodes = std::max<std::size_t>(4096, zopt.initial_nodes * 2);
  const double phi = spectral_phase(setup, detuning);
  const double envelope = pump_envelope(setup, detuning);

  // Partial block per signal radius; summed afterwards in index order.
  std::vector<std::vector<cdouble>> partial(nr);
  parallel_for(static_cast<std::size_t>(nr), policy, [&](std::size_t rs) {
    std::vector<cdouble> acc(ns * ni, 0.0);
    std::vector<cdouble> field(na);
    std::vector<cdouble> inner(ni * na);
    const double qs = rho[rs];
    for (int ri = 0; ri < nr; ++ri) {
      const double qi = rho[ri];
      // Rotational invariance: Phi depends on the azimuth difference only.
      for (int d = 0; d < na; ++d) {
        const double qp2 = qs * qs + qi * qi + 2.0 * qs * qi * std::cos(angle[d]);
        const PhaseCoefficients pc = phase_coefficients(setup, qs * qs, qi * qi, qp2, phi);
        field[d] = pump_profile(setup, qp2) * envelope * longitudinal_integral(setup, pc, zopt);
      }
      // inner[b][a] = sum_c conj(LG_i)(qi, angle c) Phi(angle a - angle c)
      for (std::size_t b = 0; b < ni; ++b) {
        const cdouble* li = &lgi[(b * nr + ri) * na];
        for (int a = 0; a < na; ++a) {
          cdouble sum = 0.0;
          for (int c = 0; c < na; ++c) sum += li[c] * field[((a - c) % na + na) % na];
          inner[b * na + a] = sum;
        }
      }
      const double w = rw[rs] * rw[ri] * aw * aw;
      for (std::size_t m = 0; m < ns; ++m) {
        const cdouble* ls = &lgs[(m * nr + rs) * na];
        for (std::size_t b = 0; b < ni; ++b) {
          cdouble sum = 0.0;
          for (int a = 0; a < na; ++a) sum += ls[a] * inner[b * na + a];
          acc[m * ni + b] += w * sum;
        }
      }
    }
    partial[rs] = std::move(acc);
  });

  std::vector<cdouble> out(ns * ni, 0.0);
  for (const auto& p : partial)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += p[k];
  return out;
}

OracleBlock brute_force_block(const SpdcSetup& setup, const std::vector<LGIndex>& signal_modes,
                              const std::vector<LGIndex>& idler_modes,
                              const DetuningPair& detuning, const OracleGrid& grid,
                              const ExecutionPolicy& policy) {
  OracleGrid g = grid;
  std::vector<cdouble> coarse = project_on_grid(setup, signal_modes, idler_modes, detuning, g, policy);
  double change = 0.0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    g = g.doubled();
    std::vector<cdouble> fine = project_on_grid(setup, signal_modes, idler_modes, detuning, g, policy);
    double max_abs = 0.0;
    double max_diff = 0.0;
    for (std::size_t k = 0; k < fine.size(); ++k) {
      max_abs = std::max(max_abs, std::abs(fine[k]));
      max_diff = std::max(max_diff, std::abs(fine[k] - coarse[k]));
    }
    change = max_abs > 0.0 ? max_diff / max_abs : 0.0;
    if (change < 5e-3) return {std::move(fine), g, change};
    coarse = std::move(fine);
  }
  std::ostringstream os;
  os << "oracle did not converge after two grid doublings (relative change " << change << ")";
  throw ConvergenceError(os.str());
}

cdouble brute_force_amplitude(const SpdcSetup& setup, const LGIndex& signal_mode,
                              const LGIndex& idler_mode, const DetuningPair& detuning,
                              const OracleGrid& grid, const ExecutionPolicy& policy) {
  return brute_force_block(setup, {signal_mode}, {idler_mode}, detuning, grid, policy).values[0];
}

}  // namespace spdc
