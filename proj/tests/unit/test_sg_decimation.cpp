#include "doctest.h"

#include <random>

#include "fractal_spectra/sg_decimation.hpp"

using namespace fractal_spectra;

TEST_CASE("R and its inverse branches") {
  CHECK(apply_R(0.0) == 0.0);
  CHECK(apply_R(0.75) == 1.5);
  const double h = 1e-7;
  CHECK((apply_R(h) - apply_R(-h)) / (2 * h) == doctest::Approx(5.0).epsilon(1e-6));

  const auto b0 = inverse_branches(cplx(0.0));
  CHECK(std::abs(b0.minus) == 0.0);
  CHECK(std::abs(b0.plus - 1.25) <= 1e-15);
  const auto b32 = inverse_branches(cplx(1.5));
  CHECK(std::abs(b32.minus - 0.5) <= 1e-15);
  CHECK(std::abs(b32.plus - 0.75) <= 1e-15);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 100; ++i) {
    cplx z(u(rng), u(rng));
    if (std::abs(z) > 2) continue;
    const auto b = inverse_branches(z);
    CHECK(std::abs(apply_R(b.minus) - z) <= 1e-12);
    CHECK(std::abs(apply_R(b.plus) - z) <= 1e-12);
  }
  std::uniform_real_distribution<double> r(-3.0, 25.0 / 16.0);
  for (int i = 0; i < 100; ++i) {
    const double z = r(rng);
    CHECK(inverse_branch(z, -1) <= 0.625);
    CHECK(inverse_branch(z, +1) >= 0.625);
  }
  CHECK_THROWS_AS(inverse_branch(2.0, -1), Error);
}

TEST_CASE("level 0 tree") {
  const auto t = generate_graph_spectrum(0, true);
  const auto s = t.spectrum(0);
  REQUIRE(s.entries.size() == 2);
  CHECK(s.entries[0].value == 0.0);
  CHECK(s.entries[0].multiplicity == 1);
  CHECK(s.entries[1].value == 1.5);
  CHECK(s.entries[1].multiplicity == 2);
}

TEST_CASE("decimation equals the dense oracle through level 4") {
  const auto t = generate_graph_spectrum(4, true);  // throws DecimationMismatch otherwise
  for (int m = 0; m <= 4; ++m) {
    const auto dense = dense_spectrum(build_level_graph(m));
    const auto s = t.spectrum(m);
    REQUIRE(s.entries.size() == dense.entries.size());
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
      CHECK(std::abs(s.entries[i].value - dense.entries[i].value) <= 1e-9);
      CHECK(s.entries[i].multiplicity == dense.entries[i].multiplicity);
    }
  }
}

TEST_CASE("tree structure: parentage, forbidden values, multiplicity inheritance") {
  const auto t = generate_graph_spectrum(4, true);
  for (std::size_t m = 1; m < t.levels.size(); ++m) {
    for (const auto& e : t.levels[m]) {
      if (is_forbidden(e.value, 1e-9)) CHECK(e.branch == Branch::Initial);
      if (e.branch == Branch::Initial) {
        CHECK(is_forbidden(e.value, 1e-12));
        continue;
      }
      const auto& parent = t.levels[m - 1][static_cast<std::size_t>(e.parent)];
      CHECK(std::abs(apply_R(e.value) - parent.value) <= 1e-10);
      CHECK(e.multiplicity == parent.multiplicity);
    }
  }
  // R maps the non-forbidden support of level m+1 into the support of level m
  for (int m = 0; m < 4; ++m) {
    const auto coarse = t.spectrum(m);
    for (const auto& e : t.spectrum(m + 1).entries) {
      if (!is_forbidden(e.value, 1e-9)) CHECK(coarse.contains(apply_R(e.value), 1e-9));
    }
  }
}

TEST_CASE("oracle-free decimation matches the oracle and extends to level 6") {
  const auto with = generate_graph_spectrum(4, true);
  const auto without = generate_graph_spectrum(6, false);
  for (int m = 0; m <= 4; ++m) {
    const auto a = with.spectrum(m), b = without.spectrum(m);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      CHECK(a.entries[i].value == doctest::Approx(b.entries[i].value).epsilon(1e-14));
      CHECK(a.entries[i].multiplicity == b.entries[i].multiplicity);
    }
  }
  for (int m = 0; m <= 6; ++m) CHECK(without.spectrum(m).total_multiplicity() == build_level_graph(m).vertex_count());
  // multiplicities of the values entering at each level
  const int three_halves[] = {2, 3, 6, 15, 42, 123};
  const int five_quarters[] = {0, 0, 1, 4, 13, 40};
  for (int m = 0; m <= 5; ++m) {
    const auto s = without.spectrum(m);
    CHECK(s.multiplicity_of(1.5, 1e-12) == three_halves[m]);
    CHECK(s.multiplicity_of(1.25, 1e-12) == five_quarters[m]);
    CHECK(s.multiplicity_of(0.5, 1e-12) == 0);
  }
}

TEST_CASE("level guards") {
  CHECK_THROWS_AS(generate_graph_spectrum(5, true), Error);
  CHECK_THROWS_AS(generate_graph_spectrum(7, false), Error);
  CHECK_THROWS_AS(generate_graph_spectrum(-1, false), Error);
  CHECK_THROWS_AS(verify_decimation_step(6), Error);
}

TEST_CASE("restriction theorem") {
  for (int m = 0; m <= 3; ++m) {
    const auto r = verify_decimation_step(m);
    CHECK(r.level == m);
    CHECK(r.checked > 0);
    CHECK(r.max_residual <= 1e-8);
  }
}

TEST_CASE("renormalized limits") {
  const double v = limit_eigenvalue({0, 1.5, {}, -1}, 1e-12);
  CHECK(v > 0);
  CHECK(std::isfinite(v));
  // seed R_-(3/2) = 1/2 one level later is the same sequence
  CHECK(limit_eigenvalue({1, 0.5, {}, -1}, 1e-14) == doctest::Approx(limit_eigenvalue({0, 1.5, {-1}, -1}, 1e-14)).epsilon(1e-10));
  CHECK(limit_eigenvalue({1, 0.5, {}, -1}, 1e-14) == doctest::Approx(limit_eigenvalue({0, 1.5, {}, -1}, 1e-14)).epsilon(1e-10));
  // explicit extra minus signs change nothing
  const double a = limit_eigenvalue({2, 1.25, {1, -1, 1}, -1}, 1e-14);
  const double b = limit_eigenvalue({2, 1.25, {1, -1, 1, -1, -1}, -1}, 1e-14);
  CHECK(a == doctest::Approx(b).epsilon(1e-10));
  // the limit equals the level-m graph eigenvalue times 5^m, pushed down the minus branch
  double lambda = 0.75, scaled = 5.0;
  for (int i = 0; i < 60; ++i) {
    lambda = inverse_branch(lambda, -1);
    scaled *= 5;
  }
  CHECK(limit_eigenvalue({0, 1.5, {1}, -1}, 1e-14) == doctest::Approx(scaled * lambda).epsilon(1e-12));
}

TEST_CASE("limit_eigenvalue errors") {
  auto kind = [](const EigenSequence& s, double tol) {
    try {
      limit_eigenvalue(s, tol);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind({0, 1.5, {}, +1}, 1e-12) == ErrorKind::DivergentSequence);
  CHECK(kind({0, 1.5, {}, -1}, 0.0) == ErrorKind::DivergentSequence);
  CHECK(kind({0, 0.7, {}, -1}, 1e-12) == ErrorKind::InvalidSequence);
  CHECK(kind({0, 1.5, {2}, -1}, 1e-12) == ErrorKind::InvalidSequence);
}
