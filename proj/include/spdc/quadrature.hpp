#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <vector>

#include "spdc/error.hpp"

namespace spdc {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached, thread-safe. n >= 1.
const GaussLegendreRule& gauss_legendre(std::size_t n);

struct QuadratureOptions {
  double rel_tol = 1e-9;
  /// Absolute floor, relative to the L1 norm sum w |f| of the estimate.
  double abs_tol = 1e-12;
  std::size_t initial_nodes = 32;
  std::size_t max_nodes = 4096;
};

struct QuadratureResult {
  std::complex<double> value;
  std::size_t nodes = 0;
};

/// Thrown when node doubling reaches max_nodes without agreement.
class QuadratureError : public ConvergenceError {
 public:
  QuadratureError(const std::string& what, std::complex<double> previous,
                  std::complex<double> last)
      : ConvergenceError(what), previous_(previous), last_(last) {}
  std::complex<double> previous() const noexcept { return previous_; }
  std::complex<double> last() const noexcept { return last_; }

 private:
  std::complex<double> previous_;
  std::complex<double> last_;
};

/// True when two successive estimates agree per `options`.
inline bool quadrature_agrees(std::complex<double> previous, std::complex<double> current,
                              double l1, const QuadratureOptions& options) {
  const double diff = std::abs(current - previous);
  return diff <= options.rel_tol * std::abs(current) || diff <= options.abs_tol * l1;
}

/// Fixed n-point Gauss-Legendre estimate of the integral of f over [a, b].
/// Also returns the L1 estimate through `l1` when non-null.
template <class F>
std::complex<double> gauss_legendre_integral(F&& f, double a, double b, std::size_t n,
                                             double* l1 = nullptr) {
  const GaussLegendreRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  std::complex<double> sum = 0.0;
  double abs_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::complex<double> v = f(mid + half * rule.nodes[j]);
    sum += rule.weights[j] * v;
    abs_sum += rule.weights[j] * std::abs(v);
  }
  if (l1) *l1 = std::abs(half) * abs_sum;
  return half * sum;
}

/// Doubles the Gauss-Legendre order from initial_nodes until two successive
/// estimates agree. Throws QuadratureError with the last two estimates.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    const QuadratureOptions& options = {}) {
  std::size_t n = options.initial_nodes;
  std::complex<double> previous = gauss_legendre_integral(f, a, b, n);
  while (n < options.max_nodes) {
    n *= 2;
    double l1 = 0.0;
    const std::complex<double> current = gauss_legendre_integral(f, a, b, n, &l1);
    if (quadrature_agrees(previous, current, l1, options)) return {current, n};
    if (n >= options.max_nodes) {
      std::ostringstream os;
      os << "quadrature did not converge by " << n << " nodes (last two estimates "
         << previous << ", " << current << ")";
      throw QuadratureError(os.str(), previous, current);
    }
    previous = current;
  }
  throw QuadratureError("quadrature max_nodes must exceed initial_nodes", previous, previous);
}

}  // namespace spdc
