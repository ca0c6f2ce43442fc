#pragma once

#include <complex>
#include <string>
#include <vector>

namespace spdc {

using cdouble = std::complex<double>;

/// Laguerre-Gaussian mode label: radial number p >= 0, OAM number l.
struct LGIndex {
  int p = 0;
  int l = 0;

  friend bool operator==(const LGIndex&, const LGIndex&) = default;
};

/// Parses "p,l" (whitespace tolerated). Throws DomainError.
LGIndex parse_lg_index(const std::string& text);
std::string to_string(const LGIndex& mode);

/// All modes with p <= max_p and |l| <= max_l, ordered by p then l.
std::vector<LGIndex> mode_block(int max_p, int max_l);

struct BeamGeometry {
  double waist = 0.0;        // m
  double focal_shift = 0.0;  // m, focal plane position relative to crystal centre

  void validate(const char* which) const;
};

/// ln(n!) exactly for n <= 20, via lgamma above.
double log_factorial(int n);

/// Expansion coefficient of the momentum-space LG mode,
///
///   LG_p^l(q) = sum_k T_k^{p,l} |q|^{2k+|l|} e^{i l phi} e^{-w^2 |q|^2 / 4}.
///
/// Throws DomainError unless 0 <= k <= p.
cdouble t_coefficient(int p, int l, int k, double waist);

/// Same coefficient with the waist measured in units of `unit`, i.e. the
/// (w/unit) power replaces the metric one. Keeps high orders representable.
cdouble t_coefficient_scaled(int p, int l, int k, double waist_over_unit);

/// Normalised momentum-space LG amplitude at transverse wave vector (qx, qy),
/// evaluated at the mode's own focal plane. Uses the Laguerre recurrence, not
/// the T expansion, so the two routes check each other.
cdouble lg_momentum_amplitude(const LGIndex& mode, double waist, double qx, double qy);

}  // namespace spdc
