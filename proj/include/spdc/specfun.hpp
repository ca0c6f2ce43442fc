#pragma once

#include <complex>

namespace spdc {

/// Principal branch of ln Gamma(z): analytic off the negative real axis and
/// real on the positive real axis. Throws PoleError at z = 0, -1, -2, ...
std::complex<double> log_gamma(std::complex<double> z);

enum class Transformation { none, pfaff, euler };

const char* to_string(Transformation t);

struct SeriesDiagnostics {
  int terms_used = 0;
  Transformation transformation_applied = Transformation::none;
  bool converged = false;
};

struct Hyp2f1Options {
  enum class Path { automatic, direct, pfaff, euler };
  Path path = Path::automatic;
  int max_terms = 10000;
  /// Automatic path: Pfaff image for Re z < 0; otherwise the direct series up
  /// to this |z|, beyond it whichever of z and z/(z-1) is smaller.
  double direct_radius = 0.8;
};

struct Hyp2f1Result {
  std::complex<double> value;
  SeriesDiagnostics diagnostics;
};

/// Regularized Gauss hypergeometric function 2F1(a, b; c; z) / Gamma(c) for
/// a, b > 0 and positive integer c. The relative truncation error of the
/// summed series is below 1e-12.
///
/// Throws DomainError outside the supported parameter regime or when the
/// selected series cannot converge (|argument| >= 1 and non-terminating), and
/// ConvergenceError when max_terms is exhausted.
Hyp2f1Result hyp2f1_regularized(double a, double b, double c, std::complex<double> z,
                                const Hyp2f1Options& options = {});

}  // namespace spdc
