#include "doctest.h"

#include <random>
#include <set>

#include "fractal_spectra/sg_graph.hpp"

using namespace fractal_spectra;

TEST_CASE("level graph counts and degrees") {
  for (int m = 0; m <= 6; ++m) {
    const auto g = build_level_graph(m);
    const int p3 = static_cast<int>(std::lround(std::pow(3.0, m)));
    CHECK(g.vertex_count() == 3 * (p3 + 1) / 2);
    CHECK(static_cast<int>(g.edges.size()) == 3 * p3);
    const auto deg = g.degrees();
    for (int i = 0; i < g.vertex_count(); ++i) CHECK(deg[static_cast<std::size_t>(i)] == (i < 3 ? 2 : 4));
  }
  CHECK(build_level_graph(1).vertex_count() == 6);
  CHECK(build_level_graph(2).vertex_count() == 15);
}

TEST_CASE("vertices are distinct points and nest across levels") {
  for (int m = 1; m <= 5; ++m) {
    const auto fine = build_level_graph(m);
    const auto coarse = build_level_graph(m - 1);
    for (int i = 0; i < coarse.vertex_count(); ++i) {
      CHECK((fine.vertices[static_cast<std::size_t>(i)] - coarse.vertices[static_cast<std::size_t>(i)]).norm() <= 1e-12);
    }
    // independent duplicate check through coordinates quantized to 1e-12
    std::set<std::pair<long long, long long>> seen;
    for (const auto& v : fine.vertices) seen.insert({std::llround(v.x() * 1e12), std::llround(v.y() * 1e12)});
    CHECK(static_cast<int>(seen.size()) == fine.vertex_count());
  }
}

TEST_CASE("level guard") {
  CHECK_THROWS_AS(build_level_graph(-1), Error);
  try {
    build_level_graph(9);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LevelTooLarge);
  }
}

TEST_CASE("laplacian matrices") {
  const auto g = build_level_graph(0);
  const Eigen::MatrixXd op = laplacian_operator(g);
  CHECK(op(0, 0) == 1.0);
  CHECK(op(0, 1) == -0.5);
  const auto g2 = build_level_graph(2);
  const Eigen::MatrixXd l = laplacian_matrix(g2);
  CHECK((l - l.transpose()).cwiseAbs().maxCoeff() == 0.0);
  // constants are in the kernel of I - D^{-1} A
  CHECK((laplacian_operator(g2) * Eigen::VectorXd::Ones(g2.vertex_count())).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("known small spectra") {
  const auto s0 = dense_spectrum(build_level_graph(0));
  REQUIRE(s0.entries.size() == 2);
  CHECK(s0.entries[0].value == doctest::Approx(0.0).scale(1.0));
  CHECK(s0.entries[0].multiplicity == 1);
  CHECK(s0.entries[1].value == doctest::Approx(1.5));
  CHECK(s0.entries[1].multiplicity == 2);

  const auto s1 = dense_spectrum(build_level_graph(1));
  REQUIRE(s1.entries.size() == 3);
  CHECK(s1.entries[1].value == doctest::Approx(0.75));
  CHECK(s1.entries[1].multiplicity == 2);
  CHECK(s1.entries[2].value == doctest::Approx(1.5));
  CHECK(s1.entries[2].multiplicity == 3);
}

TEST_CASE("spectral bounds, kernel and total multiplicity") {
  for (int m = 0; m <= 4; ++m) {
    const auto g = build_level_graph(m);
    const auto s = dense_spectrum(g);
    CHECK(s.total_multiplicity() == g.vertex_count());
    CHECK(s.entries.front().value >= -1e-12);
    CHECK(s.entries.back().value <= 2.0 + 1e-12);
    CHECK(std::abs(s.entries.front().value) <= 1e-10);
    CHECK(s.entries.front().multiplicity == 1);
    for (std::size_t i = 1; i < s.entries.size(); ++i) CHECK(s.entries[i].value > s.entries[i - 1].value);
  }
}

TEST_CASE("1/2 is an eigenvalue of the interior block at level 1 only") {
  // With the degree-normalized operator 1/2 never appears in the full-graph
  // spectrum; it sits in the boundary-pinned block at m = 1.
  const auto i1 = interior_spectrum(build_level_graph(1));
  REQUIRE(i1.entries.size() == 2);
  CHECK(i1.entries[0].value == doctest::Approx(0.5));
  CHECK(i1.entries[0].multiplicity == 1);
  CHECK(i1.entries[1].value == doctest::Approx(1.25));
  CHECK(i1.entries[1].multiplicity == 2);
  for (int m = 0; m <= 4; ++m) {
    const auto g = build_level_graph(m);
    CHECK(dense_spectrum(g).multiplicity_of(0.5, 1e-8) == 0);
    CHECK((interior_spectrum(g).multiplicity_of(0.5, 1e-8) > 0) == (m == 1));
  }
}

TEST_CASE("eigenpairs solve the generalized problem") {
  for (int m = 1; m <= 3; ++m) {
    const auto g = build_level_graph(m);
    const Eigen::MatrixXd op = laplacian_operator(g);
    for (const auto& p : eigenpairs(g)) {
      CHECK((op * p.vector - p.value * p.vector).norm() <= 1e-10 * p.vector.norm());
    }
  }
}

TEST_CASE("dense oracle size guard") {
  CHECK_THROWS_AS(dense_spectrum(build_level_graph(7)), Error);
}

TEST_CASE("harmonic extension is graph-harmonic at interior vertices") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const std::array<double, 3> b{u(rng), u(rng), u(rng)};
    for (int m = 1; m <= 4; ++m) {
      const auto ext = harmonic_extend(b, m);
      const auto g = build_level_graph(m);
      const Eigen::VectorXd lap = laplacian_operator(g) * ext.values;
      CHECK(lap.tail(g.vertex_count() - 3).cwiseAbs().maxCoeff() <= 1e-13);
      for (int i = 0; i < 3; ++i) CHECK(ext.values[i] == b[static_cast<std::size_t>(i)]);
    }
  }
  const auto e = harmonic_extend({1, 0, 0}, 1);
  CHECK(e.values[3] == doctest::Approx(0.4));
  CHECK(e.values[4] == doctest::Approx(0.2));
  CHECK(e.values[5] == doctest::Approx(0.4));
}

TEST_CASE("graph energy") {
  const auto g0 = build_level_graph(0);
  CHECK(graph_energy(g0, Eigen::Vector3d(1, 0, 0)) == doctest::Approx(2.0));
  CHECK(graph_energy(harmonic_extend({1, 0, 0}, 1)) == doctest::Approx(2.0));
  CHECK(graph_energy(VertexFunction{3, Eigen::VectorXd::Constant(42, 2.5)}) == 0.0);
  CHECK_THROWS_AS(graph_energy(g0, Eigen::Vector2d(1, 0)), Error);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 100; ++i) {
    const std::array<double, 3> b{u(rng), u(rng), u(rng)};
    const double e0 = graph_energy(g0, Eigen::Vector3d(b[0], b[1], b[2]));
    for (int m = 1; m <= 3; ++m) CHECK(std::abs(graph_energy(harmonic_extend(b, m)) - e0) <= 1e-10);
  }
}

TEST_CASE("group_eigenvalues") {
  Eigen::VectorXd v(5);
  v << 0.0, 1.0, 1.0 + 1e-10, 2.0, 2.0 + 5e-9;
  const auto s = group_eigenvalues(v);
  REQUIRE(s.entries.size() == 3);
  CHECK(s.entries[1].multiplicity == 2);
  CHECK(s.entries[2].multiplicity == 2);
  CHECK(s.contains(2.0, 1e-8));
}
