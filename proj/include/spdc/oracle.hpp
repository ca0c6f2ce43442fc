#pragma once

#include <vector>

#include "spdc/amplitude.hpp"
#include "spdc/parallel.hpp"

namespace spdc {

struct OracleGrid {
  int radial_nodes = 40;
  int azimuthal_nodes = 16;
  int z_nodes = 32;
  /// Upper limit of |q| in rad/m. 0 selects 10 / (smallest waist).
  double radial_cutoff = 0.0;

  /// Throws DomainError when a node count is < 8 or the cutoff is below
  /// 6 / (smallest waist) of the setup.
  void validate(const SpdcSetup& setup) const;
  double resolved_cutoff(const SpdcSetup& setup) const;
  OracleGrid doubled() const;
};

struct TransverseMomentum {
  double x = 0.0;  // rad/m
  double y = 0.0;
};

/// Shifted-focus mode function Phi(q_s, q_i, Omega_s, Omega_i) in the Fresnel
/// approximation. The q-independent phases (central wavenumbers times focal
/// shifts) are dropped, as in the closed form. Throws DomainError when any of
/// |q_s|, |q_i|, |q_s + q_i| reaches 0.2 of the corresponding wavenumber.
cdouble mode_function(const SpdcSetup& setup, TransverseMomentum q_s, TransverseMomentum q_i,
                      const DetuningPair& detuning, const QuadratureOptions& options = {});

struct OracleBlock {
  /// values[a * idler_modes.size() + b] for signal mode a, idler mode b.
  std::vector<cdouble> values;
  OracleGrid grid;            // finest grid evaluated
  double relative_change = 0; // max |C_fine - C_coarse| / max |C_fine|
};

/// Projection of the mode function onto every (signal, idler) pair in the
/// two lists by tensor-product quadrature: Gauss-Legendre in |q|, trapezoid in
/// the azimuth. All node counts are doubled until the block changes by less
/// than 0.5% of its maximum; after two unsuccessful doublings a
/// ConvergenceError is thrown.
OracleBlock brute_force_block(const SpdcSetup& setup, const std::vector<LGIndex>& signal_modes,
                              const std::vector<LGIndex>& idler_modes,
                              const DetuningPair& detuning, const OracleGrid& grid = {},
                              const ExecutionPolicy& policy = {});

/// Single-grid projection without the convergence loop.
std::vector<cdouble> project_on_grid(const SpdcSetup& setup,
                                     const std::vector<LGIndex>& signal_modes,
                                     const std::vector<LGIndex>& idler_modes,
                                     const DetuningPair& detuning, const OracleGrid& grid,
                                     const ExecutionPolicy& policy = {});

cdouble brute_force_amplitude(const SpdcSetup& setup, const LGIndex& signal_mode,
                              const LGIndex& idler_mode, const DetuningPair& detuning,
                              const OracleGrid& grid = {}, const ExecutionPolicy& policy = {});

}  // namespace spdc
