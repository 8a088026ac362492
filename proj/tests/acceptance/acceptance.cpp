#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fractal_spectra/lattice_trace.hpp"
#include "fractal_spectra/sg_decimation.hpp"
#include "fractal_spectra/sg_graph.hpp"
#include "fractal_spectra/sl_operator.hpp"
#include "fractal_spectra/zeta.hpp"

using namespace fractal_spectra;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> info;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

cplx random_complex(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  return {u(rng), u(rng)};
}

Outcome decimation_matches_oracle() {
  const auto start = std::chrono::steady_clock::now();
  const auto tree = generate_graph_spectrum(4, false);
  double worst = 0;
  bool multiplicities = true;
  for (int m = 1; m <= 4; ++m) {
    const auto dec = tree.spectrum(m);
    const auto dense = dense_spectrum(build_level_graph(m));
    if (dec.entries.size() != dense.entries.size()) {
      multiplicities = false;
      continue;
    }
    for (std::size_t i = 0; i < dec.entries.size(); ++i) {
      worst = std::max(worst, std::abs(dec.entries[i].value - dense.entries[i].value));
      multiplicities = multiplicities && dec.entries[i].multiplicity == dense.entries[i].multiplicity;
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-9 && multiplicities && seconds <= 10.0,
          "max eigenvalue gap " + sci(worst) + " (<= 1e-9), multiplicities " + (multiplicities ? "exact" : "DIFFER") +
              ", " + sci(seconds) + " s (<= 10)"};
}

Outcome restriction() {
  double worst = 0;
  int checked = 0;
  for (int m = 1; m <= 3; ++m) {
    const auto r = verify_decimation_step(m);
    worst = std::max(worst, r.max_residual);
    checked += r.checked;
  }
  return {worst <= 1e-8 && checked > 0,
          std::to_string(checked) + " eigenpairs, max relative residual " + sci(worst) + " (<= 1e-8)"};
}

Outcome lebesgue_closed_form() {
  const auto params = make_params(0.5);
  const auto s = generating_set(params, 5000.0, 0, 18);
  double root_err = 0;
  const bool enough = s.roots.size() >= 10;
  for (std::size_t k = 0; enough && k < 10; ++k) {
    const double odd = 2.0 * static_cast<double>(k) + 1.0;
    const double expected = std::numbers::pi * std::numbers::pi * odd * odd;
    root_err = std::max(root_err, std::abs(s.roots[k] / expected - 1.0));
  }
  double a_err = 0;
  for (double lambda : {1.0, 4.0, 10.0}) {
    a_err = std::max(a_err, std::abs(propagator(params, lambda, 18).a() - std::cos(std::sqrt(lambda))));
  }
  return {enough && root_err <= 1e-6 && a_err <= 1e-6,
          "root relative error " + sci(root_err) + " (<= 1e-6), |a - cos sqrt(l)| " + sci(a_err) + " (<= 1e-6)"};
}

Outcome functional_equation() {
  double worst = 0;
  for (double alpha : {0.3, 0.4, 0.5}) {
    const auto params = make_params(alpha);
    for (int i = 0; i < 20; ++i) {
      const double lambda = 10.0 * std::pow(1e-3, i / 19.0);
      const auto lhs = rho_map(params, phi(params, lambda, 18).point);
      worst = std::max(worst, proj_distance(lhs, phi(params, params.gamma * lambda, 18).point));
    }
  }
  return {worst <= 1e-6, "max projective distance " + sci(worst) + " (<= 1e-6)"};
}

Outcome riemann_recovery() {
  const auto params = make_params(0.5);
  const auto s = generating_set(params, kRiemannLambdaMax, 0, kDefaultSLDepth);
  const double expected[] = {1.0 / 6.0, 1.0 / 90.0, 1.0 / 945.0};
  double worst = 0;
  Outcome out;
  for (int i = 0; i < 3; ++i) {
    const double sv = 2.0 * (i + 1);
    const double err = std::abs(zeta_rho(params, sv, s).value - expected[i]);
    out.info.push_back("zeta_rho(" + std::to_string(static_cast<int>(sv)) + ") error " + sci(err));
    worst = std::max(worst, err);
  }
  const double s_err = std::abs(zeta_S(params, 2.0, s).value - 0.125);
  out.pass = worst <= 1e-6 && s_err <= 1e-6;
  out.detail = "max |zeta_rho - 1/6, 1/90, 1/945| " + sci(worst) + ", |zeta_S(2) - 1/8| " + sci(s_err) + " (<= 1e-6)";
  return out;
}

Outcome trace_map_oracle() {
  std::mt19937_64 rng(2024);
  double g_err = 0, u0_err = 0, u1_err = 0;
  for (int i = 0; i < 100; ++i) {
    const cplx u0 = random_complex(rng, 2), u1 = random_complex(rng, 2);
    const auto t = schur_trace(assemble_Q1({u0, u1}), {0, 1, 2});
    const auto [c0, c1] = trace_map_closed_form(u0, u1);
    g_err = std::max(g_err, proj_distance(ProjPoint1::of(t.u0, t.u1), g_map(ProjPoint1::of(u0, u1))));
    u0_err = std::max(u0_err, std::abs(t.u0 - c0) / std::max(1.0, std::abs(c0)));
    u1_err = std::max(u1_err, std::abs(t.u1 - 3.0 * c1) / std::max(1.0, std::abs(c1)));
  }
  return {g_err <= 1e-10 && u0_err <= 1e-12 && u1_err <= 1e-12,
          "Schur vs g " + sci(g_err) + " (<= 1e-10), u0' " + sci(u0_err) + " (<= 1e-12), u1' = 3 x closed form " +
              sci(u1_err) + " (<= 1e-12)"};
}

bool near_pole(cplx z) {
  for (cplx p : {cplx(1.0), cplx(-0.5), cplx(-1.0)}) {
    if (std::abs(z - p) < 0.25) return true;
  }
  return false;
}

Outcome conjugacy() {
  std::mt19937_64 rng(7);
  double literal = 0, affine = 0, substitution = 0, conj = 0;
  int taken = 0;
  while (taken < 100) {
    const cplx z = random_complex(rng, 2);
    if (near_pole(z)) continue;
    const auto r = conjugacy_checks(z);
    const double m = std::abs(3.0 * z / (1.0 - z));
    literal = std::max(literal, r.literal);
    affine = std::max(affine, r.affine);
    substitution = std::max(substitution, r.substitution / std::max(1.0, m));
    conj = std::max(conj, r.conjugacy / std::max(1.0, m * m));
    ++taken;
  }
  Outcome out;
  out.pass = literal <= 1e-12 && affine <= 1e-12;
  out.detail = "|p(-2z) + 2R(z)| " + sci(affine) + " (<= 1e-12), |M(g(z)) - G(M(z))| " + sci(literal) + " (<= 1e-12)";
  out.info.push_back("M(g(z)) = G(M(z)) is not an identity; the identities that hold are");
  out.info.push_back("  g(z) = G(M(z)):      max relative residual " + sci(substitution));
  out.info.push_back("  M(g(z)) = p(M(z)):   max relative residual " + sci(conj));
  return out;
}

Outcome hyperfunction_pairing() {
  const auto delta = delta_hyperfunction();
  double pair_err = 0;
  for (int k = 0; k <= 5; ++k) {
    const auto f = [k](cplx z) { return std::pow(z, k); };
    pair_err = std::max(pair_err, std::abs(pairing(delta, f, 0.5, 2.0, 4096) - 1.0));
  }
  std::mt19937_64 rng(11);
  double cancel = 0;
  int taken = 0;
  while (taken < 50) {
    const cplx z = random_complex(rng, 3);
    if (std::abs(std::abs(z) - 1.0) < 1e-3) continue;
    cancel = std::max(cancel, std::abs(delta.inner(z) + delta.outer(z)));
    ++taken;
  }
  return {pair_err <= 1e-8 && cancel <= 1e-12,
          "pairing error " + sci(pair_err) + " (<= 1e-8), inner + outer " + sci(cancel) + " (<= 1e-12)"};
}

Outcome zeta_convergence_and_poles() {
  double step = 0;
  for (double z0 : {0.75, 1.25}) {
    const auto v = zeta_R(z0, 4.0, 25);
    step = std::max(step, v.error / std::abs(v.value));
  }
  int poles = 0;
  bool on_lattice = true;
  for (const auto& f : {kSGFactorOne, kSGFactorThree}) {
    for (const auto& p : pole_lattice(f, {-10, 10, -20, 20})) {
      on_lattice = on_lattice && in_sg_pole_lattice(f, p);
      ++poles;
    }
  }
  const auto exact = zeta_SG(4.0).value.real();
  const auto truncated = truncated_spectral_zeta(4.0, 4).value.real();
  const double rel = std::abs(exact - truncated) / std::abs(exact);
  return {step <= 1e-8 && on_lattice && poles > 0 && rel <= 0.05,
          "relative depth step " + sci(step) + " (<= 1e-8), " + std::to_string(poles) + " poles " +
              (on_lattice ? "on" : "OFF") + " the lattice, zeta(4) vs truncated " + sci(rel) + " (<= 0.05)"};
}

Outcome rho_basin() {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(0, 1);
  const auto target = ProjPoint2::of(0.0, 1.0, 0.0);
  int worst_steps = 0;
  bool ok = true;
  for (double delta : {1.5, 2.0}) {
    const auto params = make_params_unchecked(delta / (1.0 + delta));
    for (int i = 0; i < 20; ++i) {
      const cplx x(n(rng), n(rng)), z(n(rng), n(rng));
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
  return {ok, "worst " + std::to_string(worst_steps) + " steps to within 1e-6 of [0,1,0] (<= 100)"};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> list{
      {"decimation equals dense diagonalization, m = 1..4", decimation_matches_oracle},
      {"restriction to V_m is an R(lambda) eigenvector, m = 1..3", restriction},
      {"alpha = 1/2 closed forms", lebesgue_closed_form},
      {"invariant-curve functional equation", functional_equation},
      {"Riemann zeta recovery at alpha = 1/2", riemann_recovery},
      {"Schur trace map oracle", trace_map_oracle},
      {"conjugacy identities", conjugacy},
      {"delta hyperfunction pairing", hyperfunction_pairing},
      {"zeta convergence and pole lattice", zeta_convergence_and_poles},
      {"rho basin of [0,1,0] for delta > 1", rho_basin},
  };
  return list;
}

bool run_one(int index) {
  const auto& [name, fn] = criteria()[static_cast<std::size_t>(index - 1)];
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out = {false, std::string("threw ") + e.what(), {}};
  }
  std::printf("criterion %2d %s  %s: %s\n", index, out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str());
  for (const auto& line : out.info) std::printf("    info: %s\n", line.c_str());
  std::fflush(stdout);
  return out.pass;
}

}  // namespace

int main(int argc, char** argv) {
  const int count = static_cast<int>(criteria().size());
  if (argc == 3 && std::strcmp(argv[1], "--criterion") == 0) {
    const int index = std::atoi(argv[2]);
    if (index < 1 || index > count) {
      std::fprintf(stderr, "criterion must lie in 1..%d\n", count);
      return 2;
    }
    return run_one(index) ? 0 : 1;
  }
  if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
    return 2;
  }
  int failed = 0;
  for (int i = 1; i <= count; ++i) failed += run_one(i) ? 0 : 1;
  std::printf("%d of %d criteria passed\n", count - failed, count);
  return failed == 0 ? 0 : 1;
}
