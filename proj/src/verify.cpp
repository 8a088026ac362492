#include "fractal_spectra/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "fractal_spectra/lattice_trace.hpp"
#include "fractal_spectra/sg_decimation.hpp"
#include "fractal_spectra/sg_graph.hpp"
#include "fractal_spectra/sl_operator.hpp"
#include "fractal_spectra/zeta.hpp"

namespace fractal_spectra {

namespace {

class Suite {
 public:
  void run(const std::string& module, const std::string& name, const std::function<std::string(bool&)>& body) {
    VerifyCheck c{module, name, false, {}};
    try {
      bool ok = true;
      c.detail = body(ok);
      c.passed = ok;
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
    checks_.push_back(std::move(c));
  }
  std::vector<VerifyCheck> take() { return std::move(checks_); }

 private:
  std::vector<VerifyCheck> checks_;
};

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

std::string max_report(double value, double bound) {
  return "max " + sci(value) + " (bound " + sci(bound) + ")";
}

cplx random_complex(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  for (;;) {
    const cplx z(u(rng), u(rng));
    if (std::abs(z) <= radius) return z;
  }
}

void numerics_checks(Suite& suite) {
  suite.run("numerics", "projective normalization idempotent", [](bool& ok) {
    std::mt19937_64 rng(11);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const auto p = ProjPoint2::of(random_complex(rng, 3), random_complex(rng, 3), random_complex(rng, 3));
      const auto once = proj_normalize(p);
      worst = std::max(worst, (proj_normalize(once).coords() - once.coords()).norm());
      worst = std::max(worst, proj_distance(p, once));
    }
    ok = worst <= 1e-14;
    return max_report(worst, 1e-14);
  });
  suite.run("numerics", "bisection and contour quadrature", [](bool& ok) {
    const double r = bisect_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
    const cplx c = contour_integral([](cplx z) { return 1.0 / z; }, 0.7, 64);
    const double err = std::max(std::abs(r - std::sqrt(2.0)), std::abs(c - 1.0));
    ok = err <= 1e-12;
    return max_report(err, 1e-12);
  });
}

void graph_checks(Suite& suite, bool quick) {
  const int oracle_max = quick ? 2 : 4;
  suite.run("sg-graph", "vertex, edge and degree counts", [&](bool& ok) {
    for (int m = 0; m <= (quick ? 4 : 6); ++m) {
      const auto g = build_level_graph(m);
      const int p3 = static_cast<int>(std::lround(std::pow(3, m)));
      const auto deg = g.degrees();
      bool deg_ok = deg[0] == 2 && deg[1] == 2 && deg[2] == 2;
      for (std::size_t i = 3; i < deg.size(); ++i) deg_ok = deg_ok && deg[i] == 4;
      ok = ok && g.vertex_count() == 3 * (p3 + 1) / 2 && static_cast<int>(g.edges.size()) == 3 * p3 && deg_ok;
    }
    return std::string(ok ? "all levels consistent" : "count mismatch");
  });
  suite.run("sg-graph", "harmonic extension preserves energy", [](bool& ok) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    const auto g0 = build_level_graph(0);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const std::array<double, 3> b{u(rng), u(rng), u(rng)};
      const double e0 = graph_energy(g0, Eigen::Vector3d(b[0], b[1], b[2]));
      for (int m = 1; m <= 3; ++m) worst = std::max(worst, std::abs(graph_energy(harmonic_extend(b, m)) - e0));
    }
    ok = worst <= 1e-10;
    return max_report(worst, 1e-10);
  });
  suite.run("sg-graph", "spectrum in [0, 2] with simple kernel", [&](bool& ok) {
    for (int m = 0; m <= oracle_max; ++m) {
      const auto s = dense_spectrum(build_level_graph(m));
      ok = ok && s.entries.front().value >= -1e-12 && s.entries.back().value <= 2.0 + 1e-12 &&
           std::abs(s.entries.front().value) <= 1e-10 && s.entries.front().multiplicity == 1;
    }
    return std::string("levels 0.." + std::to_string(oracle_max));
  });
  suite.run("sg-graph", "1/2 is an interior eigenvalue only at level 1, never a full-graph one", [&](bool& ok) {
    std::string detail;
    for (int m = 0; m <= oracle_max; ++m) {
      const auto g = build_level_graph(m);
      const bool interior = interior_spectrum(g).multiplicity_of(0.5, 1e-8) > 0;
      const bool full = dense_spectrum(g).multiplicity_of(0.5, 1e-8) > 0;
      ok = ok && interior == (m == 1) && !full;
      detail += "m=" + std::to_string(m) + (interior ? " interior" : "") + (full ? " full" : "") + "; ";
    }
    return detail;
  });
  suite.run("sg-graph", "V_{m-1} nests in V_m", [](bool& ok) {
    double worst = 0;
    for (int m = 1; m <= 6; ++m) {
      const auto fine = build_level_graph(m);
      const auto coarse = build_level_graph(m - 1);
      for (int i = 0; i < coarse.vertex_count(); ++i) {
        worst = std::max(worst, (fine.vertices[static_cast<std::size_t>(i)] - coarse.vertices[static_cast<std::size_t>(i)]).norm());
      }
    }
    ok = worst <= 1e-12;
    return max_report(worst, 1e-12);
  });
}

void decimation_checks(Suite& suite, bool quick) {
  const int oracle_max = quick ? 2 : 4;
  suite.run("sg-decimation", "decimation tree equals dense oracle", [&](bool& ok) {
    const auto tree = generate_graph_spectrum(oracle_max, true);
    for (const auto& level : tree.levels) {
      for (const auto& e : level) {
        if (is_forbidden(e.value, 1e-9)) ok = ok && e.branch == Branch::Initial;
        if (e.branch != Branch::Initial) {
          const double parent = tree.levels[&level - &tree.levels[0] - 1][static_cast<std::size_t>(e.parent)].value;
          ok = ok && std::abs(apply_R(e.value) - parent) <= 1e-10;
        }
      }
    }
    return "levels 0.." + std::to_string(oracle_max) + " matched, parentage consistent";
  });
  suite.run("sg-decimation", "restriction theorem residuals", [&](bool& ok) {
    double worst = 0;
    for (int m = 0; m <= (quick ? 1 : 3); ++m) worst = std::max(worst, verify_decimation_step(m).max_residual);
    ok = worst <= 1e-8;
    return max_report(worst, 1e-8);
  });
  suite.run("sg-decimation", "inverse branches round-trip and order", [](bool& ok) {
    std::mt19937_64 rng(3);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const cplx z = random_complex(rng, 2);
      const auto b = inverse_branches(z);
      worst = std::max({worst, std::abs(apply_R(b.minus) - z), std::abs(apply_R(b.plus) - z)});
    }
    std::uniform_real_distribution<double> u(-2.0, 25.0 / 16.0);
    for (int i = 0; i < 100; ++i) {
      const double z = u(rng);
      ok = ok && inverse_branch(z, -1) <= 0.625 + 1e-15 && inverse_branch(z, +1) >= 0.625 - 1e-15;
    }
    ok = ok && worst <= 1e-12;
    return max_report(worst, 1e-12);
  });
  suite.run("sg-decimation", "renormalized limit stable under extra minus signs", [](bool& ok) {
    const double base = limit_eigenvalue({0, 1.5, {1, -1}, -1}, 1e-14);
    const double longer = limit_eigenvalue({0, 1.5, {1, -1, -1, -1}, -1}, 1e-14);
    const double err = std::abs(base - longer) / base;
    ok = err <= 1e-10;
    return max_report(err, 1e-10);
  });
}

void sl_checks(Suite& suite, bool quick) {
  const int depth = quick ? 12 : 18;
  suite.run("sl-operator", "unit determinant", [&](bool& ok) {
    std::mt19937_64 rng(5);
    double worst = 0;
    for (double alpha : {0.3, 0.4, 0.5}) {
      const auto params = make_params(alpha);
      for (int i = 0; i < 20; ++i) {
        worst = std::max(worst, std::abs(propagator(params, random_complex(rng, 10), depth).determinant() - 1.0));
      }
    }
    ok = worst <= 1e-12;
    return max_report(worst, 1e-12);
  });
  suite.run("sl-operator", "invariant-curve functional equation", [&](bool& ok) {
    double worst = 0;
    for (double alpha : {0.3, 0.4, 0.5}) {
      const auto params = make_params(alpha);
      for (int i = 0; i < 20; ++i) {
        const double lambda = 10.0 * std::pow(1e-3, i / 19.0);
        const auto lhs = rho_map(params, phi(params, lambda, 18).point);
        worst = std::max(worst, proj_distance(lhs, phi(params, params.gamma * lambda, 18).point));
      }
    }
    ok = worst <= 1e-6;
    return max_report(worst, 1e-6);
  });
  suite.run("sl-operator", "rho homogeneity", [](bool& ok) {
    std::mt19937_64 rng(9);
    const auto params = make_params(0.4);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const auto p = ProjPoint2::of(random_complex(rng, 2), random_complex(rng, 2), random_complex(rng, 2));
      cplx beta = random_complex(rng, 5);
      if (std::abs(beta) < 1e-3) beta = 1.0;
      const auto q = ProjPoint2(beta * p.coords());
      worst = std::max(worst, proj_distance(rho_map(params, p), rho_map(params, q)));
    }
    ok = worst <= 1e-12;
    return max_report(worst, 1e-12);
  });
  suite.run("sl-operator", "D flows to [0,1,0] when delta > 1", [](bool& ok) {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> n(0, 1);
    const auto target = ProjPoint2::of(0.0, 1.0, 0.0);
    int worst_steps = 0;
    for (double delta : {1.5, 2.0}) {
      const auto params = make_params_unchecked(delta / (1.0 + delta));
      for (int i = 0; i < 20; ++i) {
        const cplx x(n(rng), n(rng));
        const cplx z(n(rng), n(rng));
        auto p = ProjPoint2::of(x, -delta * x, z);
        int steps = 0;
        while (proj_distance(p, target) > 1e-6 && steps < 100) {
          p = rho_map(params, p);
          ++steps;
        }
        ok = ok && proj_distance(p, target) <= 1e-6;
        worst_steps = std::max(worst_steps, steps);
      }
    }
    return "worst " + std::to_string(worst_steps) + " steps (bound 100)";
  });
  suite.run("sl-operator", "Lebesgue ladder pi^2 j^2 and closed-form propagator", [&](bool& ok) {
    const auto params = make_params(0.5);
    const auto s = generating_set(params, 1000.0, 0, depth);
    const auto ladder = ladder_spectrum(params, 0, 100.5 * std::numbers::pi * std::numbers::pi, s);
    double worst = 0;
    ok = ladder.values.size() >= 10;
    for (std::size_t j = 0; ok && j < 10; ++j) {
      const double expected = std::numbers::pi * std::numbers::pi * static_cast<double>((j + 1) * (j + 1));
      worst = std::max(worst, std::abs(ladder.values[j].value / expected - 1.0));
    }
    for (double lambda : {1.0, 4.0, 10.0}) {
      worst = std::max(worst, std::abs(propagator(params, lambda, 18).a() - std::cos(std::sqrt(lambda))));
    }
    ok = ok && worst <= 1e-6;
    return max_report(worst, 1e-6);
  });
  suite.run("sl-operator", "generating-set roots are certified sign changes", [&](bool& ok) {
    const auto params = make_params(0.4);
    const auto s = generating_set(params, 1e4, 0, depth);
    for (double r : s.roots) {
      const double h = 1e-9 * r;
      ok = ok && r > 0 && std::abs(generating_function(params, r, depth)) <= 1e-8 &&
           (generating_function(params, r - h, depth) < 0) != (generating_function(params, r + h, depth) < 0);
    }
    return std::to_string(s.roots.size()) + " roots";
  });
}

void lattice_checks(Suite& suite) {
  suite.run("lattice-trace", "Schur trace induces g", [](bool& ok) {
    std::mt19937_64 rng(17);
    double worst_g = 0, worst_u0 = 0, worst_inv = 0;
    for (int i = 0; i < 100; ++i) {
      const cplx u0 = random_complex(rng, 2), u1 = random_complex(rng, 2);
      const auto t = schur_trace(assemble_Q1({u0, u1}), {0, 1, 2});
      worst_g = std::max(worst_g, proj_distance(ProjPoint1::of(t.u0, t.u1), g_map(ProjPoint1::of(u0, u1))));
      worst_u0 = std::max(worst_u0, std::abs(t.u0 - 3.0 * u0 * u1 / (2.0 * u0 + u1)) / std::max(1.0, std::abs(t.u0)));
      worst_inv = std::max(worst_inv, t.invariance_residual);
    }
    ok = worst_g <= 1e-10 && worst_u0 <= 1e-12 && worst_inv <= 1e-10;
    return "g " + sci(worst_g) + ", u0' " + sci(worst_u0) + ", invariance " + sci(worst_inv);
  });
  suite.run("lattice-trace", "fixed rays of g", [](bool& ok) {
    const double d = std::max(proj_distance(g_map(ProjPoint1::of(0.0, 1.0)), ProjPoint1::of(0.0, 1.0)),
                              proj_distance(g_map(ProjPoint1::of(1.0, 1.0)), ProjPoint1::of(1.0, 1.0)));
    ok = d <= 1e-15;
    return max_report(d, 1e-15);
  });
  suite.run("lattice-trace", "g = G o M, M o g = p o M, p(-2z) = -2R(z)", [](bool& ok) {
    std::mt19937_64 rng(19);
    double worst = 0;
    int taken = 0;
    while (taken < 100) {
      const cplx z = random_complex(rng, 2);
      if (std::abs(z - 1.0) < 0.25 || std::abs(z + 1.0) < 0.25 || std::abs(z + 0.5) < 0.25) continue;
      const auto r = conjugacy_checks(z);
      const double scale = std::max(1.0, std::norm(3.0 * z / (1.0 - z)));
      worst = std::max({worst, r.substitution, r.conjugacy / scale, r.affine});
      ++taken;
    }
    ok = worst <= 1e-12;
    return max_report(worst, 1e-12);
  });
}

void zeta_checks(Suite& suite, bool quick) {
  const int depth = quick ? 12 : 18;
  suite.run("zeta-engine", "Riemann identity at s = 2, 4, 6", [&](bool& ok) {
    double worst = 0;
    for (double s : {2.0, 4.0, 6.0}) {
      worst = std::max(worst, riemann_check(s, kRiemannLambdaMax, kDefaultSLDepth).abs_err);
    }
    ok = worst <= 1e-6;
    return max_report(worst, 1e-6);
  });
  suite.run("zeta-engine", "zeta_H_n scales by gamma^{ns/2}", [&](bool& ok) {
    const auto params = make_params(0.4);
    const auto s_set = generating_set(params, 1e5, 0, depth);
    double worst = 0;
    for (cplx s : {cplx(3.0), cplx(4.0, 1.0), cplx(6.0, -2.0)}) {
      const cplx base = zeta_H_n(params, s, 0, s_set).value;
      for (int n = 1; n <= 3; ++n) {
        const cplx ratio = zeta_H_n(params, s, n, s_set).value / base;
        worst = std::max(worst, std::abs(ratio / std::pow(cplx(params.gamma), static_cast<double>(n) * s / 2.0) - 1.0));
      }
    }
    ok = worst <= 1e-13;
    return max_report(worst, 1e-13);
  });
  suite.run("zeta-engine", "zeta_R(2) = 1/z0 at every depth, positive on the real axis", [&](bool& ok) {
    const int n = quick ? 12 : 16;
    double worst = 0;
    for (double z0 : {0.75, 1.25}) {
      for (int depth = 1; depth <= n; ++depth) worst = std::max(worst, std::abs(zeta_R(z0, 2.0, depth).value - 1.0 / z0));
      for (double s : {1.0, 1.5, 3.0, 4.0, 6.0}) ok = ok && zeta_R(z0, s, n).value.real() > 0;
    }
    ok = ok && worst <= 1e-12;
    return max_report(worst, 1e-12);
  });
  suite.run("zeta-engine", "gasket factor poles lie on the stated lattice", [](bool& ok) {
    int count = 0;
    for (const auto& f : {kSGFactorOne, kSGFactorThree}) {
      for (const auto& p : pole_lattice(f, {-5, 5, -20, 20})) {
        ok = ok && in_sg_pole_lattice(f, p);
        ++count;
      }
    }
    return std::to_string(count) + " poles";
  });
  suite.run("zeta-engine", "delta pairing evaluates at 1", [](bool& ok) {
    const auto delta = delta_hyperfunction();
    double worst = 0;
    for (int k = 0; k <= 5; ++k) {
      worst = std::max(worst, std::abs(pairing(delta, [k](cplx z) { return std::pow(z, k); }, 0.8, 1.25, 4096) - 1.0));
    }
    ok = worst <= 1e-8;
    return max_report(worst, 1e-8);
  });
}

}  // namespace

std::vector<VerifyCheck> run_verification(bool quick) {
  Suite suite;
  numerics_checks(suite);
  graph_checks(suite, quick);
  decimation_checks(suite, quick);
  sl_checks(suite, quick);
  lattice_checks(suite);
  zeta_checks(suite, quick);
  return suite.take();
}

}  // namespace fractal_spectra
