#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "spdc/amplitude.hpp"
#include "spdc/error.hpp"
#include "spdc/specfun.hpp"
#include "unit/helpers.hpp"

using namespace spdc;
using testing::make_setup;
using testing::rel;

namespace {

// Integrand of z_integral built directly from the abbreviations.
cdouble integrand(const SpdcSetup& s, int nu, int js, int ji, double phi, double z) {
  const ClosedFormTerms t = closed_form_terms(s, nu, js, ji, z);
  const cdouble arg = t.D * t.D / (t.H * t.B);
  const cdouble f = hyp2f1_regularized(t.h, t.b, 1.0 + nu, arg).value;
  return std::polar(1.0, z * phi) * std::pow(t.D, nu) / (std::pow(t.H, t.h) * std::pow(t.B, t.b)) * f;
}

}  // namespace

TEST_SUITE("amplitude") {

TEST_CASE("OAM selection rule gives exact zeros") {
  const SpdcSetup s = make_setup(1e-3, 2e-5, 2e-5, 2e-5, false, PumpSpectrum::continuous(),
                                 1e-3, -2e-3, 0.5e-3);
  const DetuningPair d{0.0, 0.0};
  CHECK(overlap_amplitude(s, {0, 1}, {0, 1}, d).value == cdouble(0.0));
  CHECK(overlap_amplitude(s, {2, -2}, {1, 1}, d).value == cdouble(0.0));
  CHECK(coupling_probability(s, {1, 2}, {0, 0}, d) == 0.0);
  CHECK(OverlapKernel(s, {0, 1}, {0, 0}).vanishes());
  CHECK_FALSE(OverlapKernel(s, {0, 1}, {0, -1}).vanishes());
}

TEST_CASE("amplitudes depend only on |l|") {
  const SpdcSetup s = make_setup(5e-3, 2.5e-5, 2e-5, 1.5e-5, true, PumpSpectrum::continuous(),
                                 1e-3, -0.7e-3, 2e-3);
  const DetuningPair d = s.detuning_at_signal_wavelength(809.9e-9);
  for (int ps = 0; ps <= 2; ++ps)
    for (int pi = 0; pi <= 2; ++pi)
      for (int l = 1; l <= 2; ++l) {
        const double a = coupling_probability(s, {ps, l}, {pi, -l}, d);
        const double b = coupling_probability(s, {ps, -l}, {pi, l}, d);
        CHECK(rel(a, b) < 1e-10);
        CHECK(a > 0.0);
      }
}

TEST_CASE("real parts of H and B are fixed by the waists") {
  const double wp = 1.7e-5, ws = 2.2e-5, wi = 1.1e-5;
  for (double shift : {0.0, 3e-3, -8e-3}) {
    const SpdcSetup s = make_setup(10e-3, wp, ws, wi, true, PumpSpectrum::continuous(), shift,
                                   -shift, 0.5 * shift);
    for (double z : {-5e-3, 0.0, 2e-3, 5e-3}) {
      const ClosedFormTerms t = closed_form_terms(s, 2, 1, 0, z);
      CHECK(t.H.real() == doctest::Approx((wp * wp + ws * ws) / 4).epsilon(1e-14));
      CHECK(t.B.real() == doctest::Approx((wp * wp + wi * wi) / 4).epsilon(1e-14));
      CHECK(t.D.real() == doctest::Approx(-wp * wp / 4).epsilon(1e-14));
      CHECK(t.h == 4);
      CHECK(t.b == 3);
    }
  }
}

TEST_CASE("short crystal integral is L times the central integrand") {
  const SpdcSetup s = make_setup(0.1e-3, 2e-5, 2e-5, 2e-5);
  const QuadratureResult r = z_integral(s, {0, 0}, {0, 0}, 0, 0, {0.0, 0.0});
  const cdouble mid = integrand(s, 0, 0, 0, spectral_phase(s, {0.0, 0.0}), 0.0);
  CHECK(rel(r.value, 0.1e-3 * mid) < 1e-3);
}

TEST_CASE("z integral matches a dense trapezoid reference") {
  const SpdcSetup s = make_setup(30e-3, 2e-5, 2e-5, 2e-5, true);
  const DetuningPair d{1e13, -1e13};
  const double phi = spectral_phase(s, d);
  const int n = 1000000;
  const double a = -15e-3, h = 30e-3 / n;
  cdouble sum = 0.5 * (integrand(s, 0, 0, 0, phi, a) + integrand(s, 0, 0, 0, phi, -a));
  for (int k = 1; k < n; ++k) sum += integrand(s, 0, 0, 0, phi, a + k * h);
  const cdouble trap = sum * h;
  const QuadratureResult r = z_integral(s, {0, 0}, {0, 0}, 0, 0, d);
  CHECK(rel(r.value, trap) < 1e-7);
}

TEST_CASE("kernel evaluation agrees with independent per-term integrals") {
  const SpdcSetup s = make_setup(2e-3, 2.8e-5, 2e-5, 2e-5, true, PumpSpectrum::continuous(),
                                 0.5e-3, 1e-3, -1e-3);
  const DetuningPair d = s.detuning_at_signal_wavelength(810.1e-9);
  const LGIndex sm{1, -1}, im{2, 1};
  cdouble total = 0.0;
  for (int js = 0; js <= sm.p; ++js)
    for (int ji = 0; ji <= im.p; ++ji) {
      const double gammas = std::tgamma(1.0 + js + 1) * std::tgamma(1.0 + ji + 1);
      total += std::conj(t_coefficient(sm.p, sm.l, js, s.signal().waist)) *
               std::conj(t_coefficient(im.p, im.l, ji, s.idler().waist)) * gammas *
               z_integral(s, sm, im, js, ji, d).value;
    }
  total *= s.pump().waist / std::sqrt(2 * kPi) * kPi * kPi;
  CHECK(rel(overlap_amplitude(s, sm, im, d).value, total) < 1e-8);
}

TEST_CASE("mirrored signal and idler shifts give equal efficiency") {
  const SpdcSetup a = make_setup(1e-3, 1e-5, 1e-5, 2e-5, true, PumpSpectrum::continuous(), 0.0,
                                 1e-3, -1e-3);
  const SpdcSetup b = a.with_focal_shifts(0.0, -1e-3, 1e-3);
  const double pa = coupling_probability(a, {0, 0}, {0, 0}, {0.0, 0.0});
  const double pb = coupling_probability(b, {0, 0}, {0, 0}, {0.0, 0.0});
  CHECK(rel(pa, pb) < 1e-8);
}

TEST_CASE("repeated evaluations are bit-identical") {
  const SpdcSetup s = make_setup(10e-3, 2.8e-5, 2e-5, 2e-5, true);
  const DetuningPair d = s.detuning_at_signal_wavelength(809.95e-9);
  CHECK(overlap_amplitude(s, {1, 0}, {1, 0}, d).value ==
        overlap_amplitude(s, {1, 0}, {1, 0}, d).value);
  const OverlapKernel k(s, {1, 0}, {1, 0});
  CHECK(k.evaluate(d).value == overlap_amplitude(s, {1, 0}, {1, 0}, d).value);
}

TEST_CASE("CW pumps require anti-correlated detunings") {
  const SpdcSetup s = make_setup(1e-3, 2e-5, 2e-5, 2e-5);
  CHECK_THROWS_AS(overlap_amplitude(s, {0, 0}, {0, 0}, {1e12, -0.9e12}), DomainError);
  CHECK_NOTHROW(overlap_amplitude(s, {0, 0}, {0, 0}, {1e12, -1e12}));
  const DetuningPair d = s.detuning_at_signal_wavelength(805e-9);
  CHECK(d.idler == -d.signal);
  CHECK(d.signal > 0.0);
}

TEST_CASE("pulsed envelope factor") {
  const double t0 = 0.5e-12;
  const SpdcSetup s = make_setup(1e-3, 2e-5, 2e-5, 2e-5, false, PumpSpectrum::pulsed(t0));
  const DetuningPair d{3e12, 1e12};
  CHECK(pump_envelope(s, d) == doctest::Approx(std::exp(-t0 * t0 * 16e24 / 4)).epsilon(1e-14));
  CHECK(pump_envelope(s.with_spectrum(PumpSpectrum::continuous()), {1e12, -1e12}) == 1.0);
  CHECK_THROWS_AS(PumpSpectrum::pulsed(-1.0).validate(), DomainError);
}

TEST_CASE("setup solves and reports the poling period") {
  const SpdcSetup s = make_setup(1e-3, 2e-5, 2e-5, 2e-5, true);
  CHECK(s.poling_period() == doctest::Approx(1.0113052668289775e-05).epsilon(1e-9));
  CHECK(std::abs(s.delta_k()) < 1e-6);
  CHECK_THROWS_AS(make_setup(1e-3, -2e-5, 2e-5, 2e-5), DomainError);
}

}  // TEST_SUITE
