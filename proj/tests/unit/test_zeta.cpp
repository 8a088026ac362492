#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fractal_spectra/zeta.hpp"

using namespace fractal_spectra;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

// Newton sums of R^n(z) - z0: sum 1/z = 5^n / z0 and
// sum 1/z^2 = 25^n / z0^2 - 2 (25^n - 5^n) / (5 z0).
double newton_s4(double z0, int n) { return 1.0 / (z0 * z0) - 2.0 / (5.0 * z0) * (1.0 - std::pow(5.0, -n)); }

const GeneratingSet& lebesgue_set() {
  static const GeneratingSet s = generating_set(make_params(0.5), 1e6, 0, 18);
  return s;
}

const GeneratingSet& set_04() {
  static const GeneratingSet s = generating_set(make_params(0.4), 1e6, 0, 18);
  return s;
}

}  // namespace

TEST_CASE("preimage zeta against Newton sums") {
  CHECK(preimage_convergence_abscissa() == doctest::Approx(2 * std::log(2.0) / std::log(5.0)));
  for (double z0 : {0.75, 1.25}) {
    for (int depth : {1, 4, 9, 14}) {
      const auto two = zeta_R(z0, 2.0, depth, 1);
      CHECK(std::abs(two.value - 1.0 / z0) <= 1e-12);
      const auto four = zeta_R(z0, 4.0, depth, 1);
      CHECK(std::abs(four.value - newton_s4(z0, depth)) <= 1e-12);
    }
  }
  CHECK(zeta_R(0.75, 4.0, 20).value.real() == doctest::Approx(56.0 / 45.0).epsilon(1e-12));
  CHECK(zeta_R(1.25, 4.0, 20).value.real() == doctest::Approx(8.0 / 25.0).epsilon(1e-12));
}

TEST_CASE("preimage zeta: error estimate, parallel determinism, monotonicity") {
  const auto a = zeta_R(0.75, cplx(3.0, 1.0), 14, 1);
  const auto b = zeta_R(0.75, cplx(3.0, 1.0), 14, 4);
  CHECK(a.value == b.value);
  const auto coarse = zeta_R(0.75, 3.0, 10, 1), fine = zeta_R(0.75, 3.0, 16, 1);
  CHECK(std::abs(coarse.value - fine.value) <= 2 * coarse.error + 1e-15);
  for (double s : {1.2, 2.0, 3.0, 5.0}) {
    const auto v = zeta_R(0.75, s, 14, 1);
    CHECK(std::abs(v.value.imag()) <= 1e-14);
    CHECK(v.value.real() > 0);
  }
  // from 5/4 every renormalized preimage exceeds 1 and the sum decreases in s;
  // from 3/4 the minus-branch limit lies below 1 and the sum eventually grows
  double previous = 1e300;
  for (double s : {1.0, 2.0, 3.0, 4.0, 6.0, 8.0}) {
    const double v = zeta_R(1.25, s, 14, 1).value.real();
    CHECK(v < previous);
    previous = v;
  }
  CHECK(zeta_R(0.75, 3.0, 14, 1).value.real() < zeta_R(0.75, 8.0, 14, 1).value.real());
}

TEST_CASE("preimage zeta errors") {
  CHECK(kind_of([] { zeta_R(0.75, 0.9, 10); }) == ErrorKind::OutsideConvergenceStrip);
  CHECK(kind_of([] { zeta_R(0.75, 2.0, kMaxPreimageDepth + 1); }) == ErrorKind::DepthTooLarge);
  CHECK(kind_of([] { zeta_R(0.75, 2.0, 0); }) == ErrorKind::DepthTooLarge);
  CHECK(kind_of([] { zeta_R(2.0, 2.0, 5); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("gasket zeta") {
  CHECK(zeta_SG(4.0, 20).value.real() == doctest::Approx(8.0 / 75.0).epsilon(1e-12));
  // the finite-level sums approach the closed form
  const auto exact3 = zeta_SG(3.0, 20).value.real();
  double previous_gap = 1e300;
  for (int m = 1; m <= 4; ++m) {
    const double gap = std::abs(exact3 - truncated_spectral_zeta(3.0, m).value.real());
    CHECK(gap < previous_gap);
    previous_gap = gap;
  }
  CHECK(std::abs(zeta_SG(4.0, 20).value - truncated_spectral_zeta(4.0, 4).value) <= 1.5e-5);
  CHECK(kind_of([] { zeta_SG(0.0, 10); }) == ErrorKind::NearPole);
  CHECK(kind_of([] { zeta_SG(cplx(0.0, 4 * std::numbers::pi / std::log(5.0)), 10); }) == ErrorKind::NearPole);
  CHECK(kind_of([] { zeta_SG(std::log(9.0) / std::log(5.0), 10); }) == ErrorKind::NearPole);
  // odd multiples of 2 pi i / log 5 are regular points, but outside the strip
  CHECK(kind_of([] { zeta_SG(cplx(0.0, 2 * std::numbers::pi / std::log(5.0)), 10); }) ==
        ErrorKind::OutsideConvergenceStrip);
  CHECK(kind_of([] { zeta_SG(0.5, 10); }) == ErrorKind::OutsideConvergenceStrip);
}

TEST_CASE("power-law fit") {
  std::vector<double> v;
  for (int j = 1; j <= 1000; ++j) v.push_back(3.0 * std::pow(j, 1.7));
  const auto fit = fit_power_law(v);
  CHECK(fit.coefficient == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fit.exponent == doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("zeta over S and the half-line") {
  const auto p = make_params(0.5);
  const auto& s = lebesgue_set();
  const auto two = zeta_S(p, 2.0, s);
  CHECK(std::abs(two.value - 0.125) <= 1e-6);
  CHECK(std::abs(two.value - 0.125) <= two.error + 1e-9);
  CHECK(std::abs(zeta_S(p, 4.0, s).value - 1.0 / 96.0) <= 1e-9);
  const auto h0 = zeta_H_n(p, 2.0, 0, s);
  CHECK(std::abs(h0.value - 1.0 / 6.0) <= h0.error + 1e-9);
  CHECK(std::abs(h0.value - 1.0 / 6.0) <= 2e-6);
  CHECK(std::abs(zeta_rho(p, 4.0, s).value - 1.0 / 90.0) <= 1e-9);
  CHECK(std::abs(zeta_rho(p, 6.0, s).value - 1.0 / 945.0) <= 1e-10);
  for (int n : {1, 2, 3}) {
    const cplx scale = std::pow(cplx(p.gamma), n * 3.0 / 2.0);
    CHECK(std::abs(zeta_H_n(p, 3.0, n, s).value - scale * zeta_H_n(p, 3.0, 0, s).value) <= 1e-12 * std::abs(scale));
  }
  CHECK(kind_of([&] { zeta_H_n(p, 0.0, 0, s); }) == ErrorKind::NearPole);
  double previous = 1e300;
  for (double sv : {1.5, 2.0, 3.0, 4.0, 6.0}) {
    const double v = zeta_S(make_params(0.4), sv, set_04()).value.real();
    CHECK(v > 0);
    CHECK(v < previous);
    previous = v;
  }
}

TEST_CASE("direct orbit sum agrees with the identity") {
  const auto p = make_params(0.4);
  const auto& s = set_04();
  for (double sv : {2.0, 3.0}) {
    const auto identity = zeta_rho(p, sv, s, ZetaRhoMode::Identity);
    const auto direct = zeta_rho(p, sv, s, ZetaRhoMode::Direct);
    CHECK(std::abs(identity.value - direct.value) <= direct.error + identity.error);
  }
}

TEST_CASE("Riemann check") {
  const auto r4 = riemann_check(4.0);
  CHECK(r4.lhs == doctest::Approx(std::pow(std::numbers::pi, 4) / 90));
  CHECK(r4.abs_err <= 1e-10);
  CHECK(riemann_check(2.0).abs_err <= 1e-6);
}

TEST_CASE("hyperfunction pairing") {
  const auto delta = delta_hyperfunction();
  CHECK(std::abs(delta.inner(0.5) - 2.0) <= 1e-15);
  CHECK(std::abs(delta.outer(2.0) - 1.0) <= 1e-15);
  auto f = [](cplx z) { return std::exp(z); };
  CHECK(std::abs(pairing(delta, f, 0.5, 2.0) - std::exp(1.0)) <= 1e-12);
  auto g = [](cplx z) { return z * z + 3.0 * z; };
  CHECK(std::abs(pairing(delta, g, 0.9, 1.1, 8192) - 4.0) <= 1e-10);
  CHECK(kind_of([&] { pairing(delta, f, 1.0, 2.0); }) == ErrorKind::InvalidAnnulus);
  CHECK(kind_of([&] { pairing(delta, f, 0.5, 0.9); }) == ErrorKind::InvalidAnnulus);
}

TEST_CASE("unbounded zeta") {
  UnboundedInput sg;
  const auto inside = zeta_unbounded(sg, 4.0);
  CHECK(inside.branch == HyperBranch::Inner);
  CHECK(inside.base == 5.0);
  CHECK(std::abs(inside.factor_value - 1.0 / (1.0 - 0.04)) <= 1e-14);
  CHECK(inside.cancellation <= 1e-14);
  REQUIRE(inside.prefactor.has_value());
  CHECK(std::abs(*inside.prefactor - 8.0 / 75.0) <= 1e-10);
  CHECK(std::abs(*inside.product - 8.0 / 75.0 / 0.96) <= 1e-10);

  const auto outside = zeta_unbounded(sg, -2.0);
  CHECK(outside.branch == HyperBranch::Outer);
  CHECK(std::abs(outside.factor_value - 1.0 / (5.0 - 1.0)) <= 1e-14);
  CHECK(!outside.prefactor.has_value());
  CHECK(!outside.product.has_value());
  CHECK(kind_of([&] { zeta_unbounded(sg, cplx(0.0, 1.0)); }) == ErrorKind::OnCircleBoundary);

  UnboundedInput sl{UnboundedKind::SL, make_params(0.4), &set_04()};
  const auto slr = zeta_unbounded(sl, 3.0);
  CHECK(slr.base == doctest::Approx(make_params(0.4).gamma));
  REQUIRE(slr.product.has_value());
  const auto h0 = zeta_H_n(sl.params, 3.0, 0, set_04());
  CHECK(std::abs(*slr.product - h0.value) <= 1e-12 * std::abs(h0.value));
  UnboundedInput half{UnboundedKind::SL, make_params(0.5), &lebesgue_set()};
  CHECK(kind_of([&] { zeta_unbounded(half, 3.0); }) == ErrorKind::UnsupportedAlpha);
}

TEST_CASE("pole lattices") {
  const double period = 4 * std::numbers::pi / std::log(5.0);
  const auto one = pole_lattice(kSGFactorOne, {-1, 1, -10, 10});
  REQUIRE(one.size() == 3);
  for (const auto& pole : one) {
    CHECK(std::abs(pole.s.real()) <= 1e-14);
    CHECK(pole.s.imag() == doctest::Approx(period * static_cast<double>(pole.k)));
    CHECK(std::abs(kSGFactorOne.denominator(pole.s)) <= 1e-12);
    CHECK(in_sg_pole_lattice(kSGFactorOne, pole));
  }
  const auto three = pole_lattice(kSGFactorThree, {0, 2, -20, 20});
  CHECK(three.size() == 5);
  for (const auto& pole : three) {
    CHECK(pole.s.real() == doctest::Approx(std::log(9.0) / std::log(5.0)));
    CHECK(std::abs(kSGFactorThree.denominator(pole.s)) <= 1e-12);
    CHECK(in_sg_pole_lattice(kSGFactorThree, pole));
  }
  CHECK(pole_lattice(kSGFactorOne, {0.5, 1, -10, 10}).empty());
  const GeometricFactor other{4.0, 1.0};
  const auto foreign = pole_lattice(other, {-1, 1, -10, 10});
  bool any_outside = false;
  for (const auto& pole : foreign) any_outside = any_outside || !in_sg_pole_lattice(other, pole);
  CHECK(any_outside);
  CHECK(kind_of([] { pole_lattice({1.0, 1.0}, {-1, 1, -1, 1}); }) == ErrorKind::InvalidArgument);
}
