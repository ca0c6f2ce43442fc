#include "spdc/specfun.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "spdc/error.hpp"

namespace spdc {
namespace {

using cdouble = std::complex<double>;

// B_{2n} / (2n (2n-1)), n = 1..10.
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,          -1.0 / 360.0,     1.0 / 1260.0,          -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0, 1.0 / 156.0,          -3617.0 / 122400.0,
    43867.0 / 244188.0,  -174611.0 / 125400.0};

constexpr double kHalfLog2Pi = 0.91893853320467274178;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

struct SeriesSum {
  cdouble value;
  int terms = 0;
  bool converged = false;
};

// sum_n (a)_n (b)_n / ((c)_n n!) z^n for c > 0. Terminates exactly when a or
// b is a non-positive integer.
SeriesSum gauss_series(double a, double b, double c, cdouble z, int max_terms) {
  const bool terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
  const double az = std::abs(z);
  if (!terminating && !(az < 1.0)) {
    std::ostringstream os;
    os << "2F1 series argument |z| = " << az << " >= 1 and the series does not terminate";
    throw DomainError(os.str());
  }
  SeriesSum s;
  cdouble term = 1.0;
  s.value = term;
  s.terms = 1;
  double max_abs = 1.0;
  for (int n = 0; n < max_terms; ++n) {
    const double num = (a + n) * (b + n);
    if (num == 0.0) {
      s.converged = true;
      return s;
    }
    const double ratio_coef = num / ((c + n) * (n + 1.0));
    term *= ratio_coef * z;
    s.value += term;
    ++s.terms;
    const double at = std::abs(term);
    max_abs = std::max(max_abs, at);
    if (terminating) continue;
    const double r = std::max(std::abs(ratio_coef) * az, az);
    if (r < 1.0) {
      const double tail = at * r / (1.0 - r);
      const double scale = std::max(std::abs(s.value), 1e-300 * max_abs);
      if (tail <= 1e-13 * scale) {
        s.converged = true;
        return s;
      }
    }
  }
  return s;
}

void check_regime(double a, double b, double c) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("hyp2f1_regularized supports a, b > 0 only");
  }
  if (!(c >= 1.0) || c != std::floor(c)) {
    throw DomainError("hyp2f1_regularized supports positive integer c only");
  }
}

}  // namespace

const char* to_string(Transformation t) {
  switch (t) {
    case Transformation::none: return "none";
    case Transformation::pfaff: return "pfaff";
    case Transformation::euler: return "euler";
  }
  return "?";
}

cdouble log_gamma(cdouble z) {
  if (z.imag() == 0.0 && is_nonpositive_integer(z.real())) {
    std::ostringstream os;
    os << "log_gamma pole at z = " << z.real();
    throw PoleError(os.str());
  }
  // ln Gamma(z) = ln Gamma(z + m) - sum_{k<m} ln(z + k); principal logs keep
  // the branch continuous off the negative real axis.
  cdouble shift = 0.0;
  while (z.real() < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const cdouble inv = 1.0 / z;
  const cdouble inv2 = inv * inv;
  cdouble series = 0.0;
  cdouble power = inv;
  for (double coeff : kStirling) {
    series += coeff * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series - shift;
}

Hyp2f1Result hyp2f1_regularized(double a, double b, double c, cdouble z,
                                const Hyp2f1Options& options) {
  check_regime(a, b, c);
  const double inv_gamma_c = std::exp(-std::lgamma(c));

  using Path = Hyp2f1Options::Path;
  Path path = options.path;
  if (path == Path::automatic) {
    // Left half-plane: the direct series alternates and cancels; the Pfaff
    // image lies inside the unit disk there.
    const double az = std::abs(z);
    const bool pfaff_terminates = is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b);
    if (z.real() < 0.0) {
      path = Path::pfaff;
    } else if (az <= options.direct_radius) {
      path = Path::direct;
    } else if (z == cdouble(1.0)) {
      path = Path::direct;
    } else {
      const double aw = std::abs(z / (z - 1.0));
      path = pfaff_terminates || aw < az || az >= 1.0 ? Path::pfaff : Path::direct;
    }
  }

  Hyp2f1Result out;
  SeriesSum s;
  cdouble prefactor = 1.0;
  switch (path) {
    case Path::direct:
      s = gauss_series(a, b, c, z, options.max_terms);
      out.diagnostics.transformation_applied = Transformation::none;
      break;
    case Path::pfaff: {
      if (z == cdouble(1.0)) throw DomainError("2F1 Pfaff transformation undefined at z = 1");
      const cdouble w = z / (z - 1.0);
      // Prefer the variant whose series terminates.
      if (!is_nonpositive_integer(c - b) && is_nonpositive_integer(c - a)) {
        prefactor = std::pow(1.0 - z, -b);
        s = gauss_series(b, c - a, c, w, options.max_terms);
      } else {
        prefactor = std::pow(1.0 - z, -a);
        s = gauss_series(a, c - b, c, w, options.max_terms);
      }
      out.diagnostics.transformation_applied = Transformation::pfaff;
      break;
    }
    case Path::euler:
      if (z == cdouble(1.0)) throw DomainError("2F1 Euler transformation undefined at z = 1");
      prefactor = std::pow(1.0 - z, c - a - b);
      s = gauss_series(c - a, c - b, c, z, options.max_terms);
      out.diagnostics.transformation_applied = Transformation::euler;
      break;
    case Path::automatic:
      break;
  }

  out.diagnostics.terms_used = s.terms;
  out.diagnostics.converged = s.converged;
  if (!s.converged) {
    std::ostringstream os;
    os << "2F1(" << a << ", " << b << "; " << c << "; " << z << ") did not converge within "
       << options.max_terms << " terms (transformation "
       << to_string(out.diagnostics.transformation_applied) << ")";
    throw ConvergenceError(os.str());
  }
  out.value = prefactor * s.value * inv_gamma_c;
  return out;
}

}  // namespace spdc
