#include "fractal_spectra/zeta.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "fractal_spectra/sg_decimation.hpp"

namespace fractal_spectra {

double preimage_convergence_abscissa() { return 2.0 * std::log(2.0) / std::log(5.0); }

namespace {

constexpr int kSplitLevel = 6;

struct LevelPair {
  CompensatedSum<cplx> previous;  // level n-1
  CompensatedSum<cplx> current;   // level n
};

class PreimageSummer {
 public:
  PreimageSummer(cplx s, int depth) : half_s_(s / 2.0), depth_(depth), log5_(std::log(5.0)) {}

  cplx term(double z, int level) const { return std::exp(-half_s_ * (level * log5_ + std::log(z))); }

  void descend(double z, int level, LevelPair& acc) const {
    const double root = std::sqrt(25.0 - 16.0 * z);
    const double minus = 2.0 * z / (5.0 + root);
    const double plus = (5.0 + root) / 8.0;
    if (level == depth_ - 1) {
      acc.previous.add(term(z, level));
      acc.current.add(term(minus, depth_));
      acc.current.add(term(plus, depth_));
      return;
    }
    descend(minus, level + 1, acc);
    descend(plus, level + 1, acc);
  }

 private:
  cplx half_s_;
  int depth_;
  double log5_;
};

void check_pole(const GeometricFactor& f, cplx s) {
  if (std::abs(f.denominator(s)) < kNearPoleTol) {
    throw Error(ErrorKind::NearPole, "1 - " + std::to_string(f.coefficient) + " * " + std::to_string(f.base) +
                                         "^{-s/2} vanishes within 1e-8");
  }
}

void check_strip(cplx s) {
  const double bound = preimage_convergence_abscissa() + kConvergenceMargin;
  if (!(s.real() > bound)) {
    throw Error(ErrorKind::OutsideConvergenceStrip,
                "Re(s) = " + std::to_string(s.real()) + " must exceed " + std::to_string(bound));
  }
}

}  // namespace

ZetaValue zeta_R(double z0, cplx s, int depth, int parallelism) {
  check_strip(s);
  if (!(z0 > 0.0 && z0 < 25.0 / 16.0)) throw Error(ErrorKind::InvalidArgument, "z0 must lie in (0, 25/16)");
  if (depth < 1 || depth > kMaxPreimageDepth) {
    throw Error(ErrorKind::DepthTooLarge, "preimage depth must lie in [1, " + std::to_string(kMaxPreimageDepth) + "]");
  }
  if (parallelism < 0) throw Error(ErrorKind::InvalidArgument, "parallelism must be non-negative");

  const PreimageSummer summer(s, depth);
  // Fixed split into subtrees so the reduction order never depends on scheduling.
  const int split = std::min(kSplitLevel, depth - 1);
  std::vector<double> roots{z0};
  for (int level = 0; level < split; ++level) {
    std::vector<double> next;
    next.reserve(roots.size() * 2);
    for (double z : roots) {
      next.push_back(inverse_branch(z, -1));
      next.push_back(inverse_branch(z, +1));
    }
    roots = std::move(next);
  }

  std::vector<LevelPair> partial(roots.size());
  std::atomic<std::size_t> next_task{0};
  auto worker = [&] {
    for (std::size_t i = next_task++; i < roots.size(); i = next_task++) summer.descend(roots[i], split, partial[i]);
  };
  unsigned threads = parallelism == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                      : static_cast<unsigned>(parallelism);
  threads = std::min<unsigned>(threads, static_cast<unsigned>(roots.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  CompensatedSum<cplx> previous, current;
  for (const auto& p : partial) {
    previous.add(p.previous.value());
    current.add(p.current.value());
  }
  return {s, current.value(), std::abs(current.value() - previous.value()), depth};
}

ZetaValue zeta_SG(cplx s, int depth, int parallelism) {
  check_pole(kSGFactorOne, s);
  check_pole(kSGFactorThree, s);
  check_strip(s);
  const ZetaValue z34 = zeta_R(0.75, s, depth, parallelism);
  const ZetaValue z54 = zeta_R(1.25, s, depth, parallelism);
  const cplx w = std::pow(cplx(5.0), -s / 2.0);
  const cplx f1 = kSGFactorOne(s);
  const cplx f3 = kSGFactorThree(s);
  const cplx c34 = w / 2.0 * (f3 + 3.0 * f1);
  const cplx c54 = w * w / 2.0 * (3.0 * f3 - f1);
  return {s, z34.value * c34 + z54.value * c54, std::abs(c34) * z34.error + std::abs(c54) * z54.error, depth};
}

ZetaValue truncated_spectral_zeta(cplx s, int m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "truncated spectrum needs level >= 1");
  const DecimationTree tree = generate_graph_spectrum(m, true);
  auto level_sum = [&](int level) {
    CompensatedSum<cplx> acc;
    for (const auto& e : tree.levels[static_cast<std::size_t>(level)]) {
      if (e.value < 1e-12) continue;
      double lambda = e.value;
      double kappa = std::pow(kDecimationScale, level) * lambda;
      for (int it = 0; it < 200; ++it) {
        const double root = std::sqrt(25.0 - 16.0 * lambda);
        const double next = kappa * (10.0 / (5.0 + root));
        lambda = 2.0 * lambda / (5.0 + root);
        const bool done = std::abs(next - kappa) <= 1e-16 * next;
        kappa = next;
        if (done) break;
      }
      acc.add(static_cast<double>(e.multiplicity) * std::exp(-s / 2.0 * std::log(kappa)));
    }
    return acc.value();
  };
  const cplx value = level_sum(m);
  return {s, value, std::abs(value - level_sum(m - 1)), m};
}

PowerLawFit fit_power_law(const std::vector<double>& ascending) {
  const std::size_t n = ascending.size();
  if (n < 2) throw Error(ErrorKind::CoverageError, "power-law fit needs at least two roots");
  std::size_t first = n - 1;
  while (first > 0 && ascending[first - 1] >= ascending.back() / 10.0) --first;
  first = std::min(first, n - std::min<std::size_t>(n, 3));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = static_cast<double>(n - first);
  for (std::size_t i = first; i < n; ++i) {
    const double x = std::log(static_cast<double>(i + 1));
    const double y = std::log(ascending[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  if (!(denom > 0)) throw Error(ErrorKind::CoverageError, "degenerate power-law fit");
  const double beta = (count * sxy - sx * sy) / denom;
  return {std::exp((sy - beta * sx) / count), beta};
}

namespace {

/// Partial sum over the roots plus the integral of (C x^beta)^{-s/2} from N.
ZetaValue power_sum_with_tail(const std::vector<double>& roots, cplx s, double expected_exponent) {
  if (!(s.real() > 0)) throw Error(ErrorKind::OutsideConvergenceStrip, "Re(s) must be positive");
  if (roots.empty()) throw Error(ErrorKind::CoverageError, "no roots to sum");
  CompensatedSum<cplx> acc;
  for (double r : roots) acc.add(std::exp(-s / 2.0 * std::log(r)));
  const cplx partial = acc.value();

  const PowerLawFit fit = fit_power_law(roots);
  if (std::abs(fit.exponent - expected_exponent) > 0.25 * expected_exponent) {
    throw Error(ErrorKind::CoverageError, "root growth exponent " + std::to_string(fit.exponent) +
                                              " is far from the expected " + std::to_string(expected_exponent) +
                                              "; raise lambda_max");
  }
  const cplx e = fit.exponent * s / 2.0;
  if (!(e.real() > 1.0)) throw Error(ErrorKind::CoverageError, "tail integral diverges at this s");
  const double N = static_cast<double>(roots.size());
  const cplx tail = std::pow(cplx(fit.coefficient), -s / 2.0) * std::pow(cplx(N), 1.0 - e) / (e - 1.0);
  if (std::abs(tail) > kMaxTailFraction * std::abs(partial)) {
    throw Error(ErrorKind::CoverageError, "tail estimate exceeds 10% of the partial sum; raise lambda_max");
  }
  return {s, partial + tail, std::abs(tail), static_cast<long long>(roots.size())};
}

double expected_root_exponent(const SLParams& params) { return std::log(params.gamma) / std::log(2.0); }

}  // namespace

ZetaValue zeta_S(const SLParams& params, cplx s, const GeneratingSet& S) {
  return power_sum_with_tail(S.roots, s, expected_root_exponent(params));
}

ZetaValue zeta_H_n(const SLParams& params, cplx s, int n, const GeneratingSet& S) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "blow-up level must be non-negative");
  const GeometricFactor factor{params.gamma, 1.0};
  check_pole(factor, s);
  const ZetaValue zs = zeta_S(params, s, S);
  const cplx scale = std::pow(cplx(params.gamma), static_cast<double>(n) * s / 2.0) * factor(s);
  return {s, scale * zs.value, std::abs(scale) * zs.error, zs.count};
}

ZetaValue zeta_rho(const SLParams& params, cplx s, const GeneratingSet& S, ZetaRhoMode mode) {
  if (mode == ZetaRhoMode::Identity) return zeta_H_n(params, s, 0, S);

  const GeometricFactor factor{params.gamma, 1.0};
  check_pole(factor, s);
  const double max_ratio = std::pow(params.gamma, 1.0 / 8.0);
  const int points = std::max(S.grid_points, 2);
  CompensatedSum<cplx> value;
  double error = 0;
  long long count = 0;
  for (int p = 0; p <= kDirectOrbitDepth; ++p) {
    const auto scan = find_simple_roots([&](double l) { return orbit_condition(params, l, p, S.depth); },
                                        kRootScanFloor, S.lambda_max, points, max_ratio, Tolerances{}.root_tol);
    const ZetaValue level = power_sum_with_tail(scan.roots, s, expected_root_exponent(params));
    const cplx weight = std::pow(cplx(params.gamma), -static_cast<double>(p) * s / 2.0);
    value.add(weight * level.value);
    error += std::abs(weight) * level.error;
    count += level.count;
  }
  // orbit depths beyond kDirectOrbitDepth
  const ZetaValue zs = zeta_S(params, s, S);
  error += std::abs(std::pow(cplx(params.gamma), -static_cast<double>(kDirectOrbitDepth + 1) * s / 2.0) * factor(s) * zs.value);
  return {s, value.value(), error, count};
}

RiemannCheck riemann_check(double s, double lambda_max, int depth) {
  const SLParams params = make_params(0.5);
  const GeneratingSet S = generating_set(params, lambda_max, 0, depth);
  const ZetaValue z = zeta_rho(params, cplx(s), S);
  const double rhs = std::pow(std::numbers::pi, s) * z.value.real();
  const double lhs = std::riemann_zeta(s);
  return {s, lhs, rhs, std::abs(lhs - rhs)};
}

HyperfunctionPair delta_hyperfunction() {
  return {[](cplx z) { return 1.0 / (1.0 - z); }, [](cplx z) { return 1.0 / (z - 1.0); }};
}

cplx pairing(const HyperfunctionPair& h, const std::function<cplx(cplx)>& f, double r_in, double r_out, int nodes) {
  if (!(r_in > 0.0 && r_in < 1.0 && r_out > 1.0 && std::isfinite(r_out))) {
    throw Error(ErrorKind::InvalidAnnulus, "radii must satisfy 0 < r_in < 1 < r_out");
  }
  const cplx outer = contour_integral([&](cplx z) { return f(z) * h.outer(z); }, r_out, nodes);
  const cplx inner = contour_integral([&](cplx z) { return f(z) * h.inner(z); }, r_in, nodes);
  return outer - inner;
}

UnboundedReport zeta_unbounded(const UnboundedInput& input, cplx s) {
  if (std::abs(s.real()) <= 1e-12) {
    throw Error(ErrorKind::OnCircleBoundary, "Re(s) = 0 puts base^{-s/2} on the unit circle");
  }
  UnboundedReport r{};
  r.kind = input.kind;
  r.s = s;
  if (input.kind == UnboundedKind::SL) {
    if (input.params.alpha >= 0.5) {
      throw Error(ErrorKind::UnsupportedAlpha, "alpha = 1/2 gives a continuous half-line spectrum");
    }
    r.base = input.params.gamma;
  } else {
    r.base = 5.0;
  }
  const HyperfunctionPair delta = delta_hyperfunction();
  const cplx z = std::pow(cplx(r.base), -s / 2.0);
  const bool inside = s.real() > 0;
  r.branch = inside ? HyperBranch::Inner : HyperBranch::Outer;
  r.factor_value = inside ? delta.inner(z) : delta.outer(z);
  r.opposite_value = inside ? delta.outer(z) : delta.inner(z);
  r.cancellation = std::abs(r.factor_value + r.opposite_value);

  if (input.kind == UnboundedKind::SG) {
    if (s.real() > preimage_convergence_abscissa() + kConvergenceMargin) {
      r.prefactor = zeta_SG(s, input.sg_depth).value;
    }
  } else if (inside && input.generating_set != nullptr) {
    r.prefactor = zeta_S(input.params, s, *input.generating_set).value;
  }
  if (r.prefactor) r.product = *r.prefactor * r.factor_value;
  return r;
}

std::vector<Pole> pole_lattice(const GeometricFactor& factor, const SWindow& window) {
  if (!(factor.base > 0.0 && factor.base != 1.0 && factor.coefficient > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "geometric factor needs base > 0, base != 1, coefficient > 0");
  }
  std::vector<Pole> out;
  if (window.re_min > window.re_max || window.im_min > window.im_max) return out;
  const double log_base = std::log(factor.base);
  const double re = 2.0 * std::log(factor.coefficient) / log_base;
  if (re < window.re_min || re > window.re_max) return out;
  const double step = 4.0 * std::numbers::pi / log_base;
  const double a = window.im_min / step;
  const double b = window.im_max / step;
  auto k_lo = static_cast<long long>(std::ceil(std::min(a, b)));
  auto k_hi = static_cast<long long>(std::floor(std::max(a, b)));
  for (long long k = k_lo; k <= k_hi; ++k) {
    const double im = static_cast<double>(k) * step;
    if (im < window.im_min || im > window.im_max) continue;
    out.push_back({cplx(re, im), k});
  }
  return out;
}

bool in_sg_pole_lattice(const GeometricFactor& factor, const Pole& pole) {
  // (2 log c + 4 pi i k)/log 5 = (log c^2 + 2 pi i (2k))/log 5, and c^2 is 1 or 9
  if (factor.base != 5.0) return false;
  if (factor.coefficient != 1.0 && factor.coefficient != 3.0) return false;
  const long long n = 2 * pole.k;
  const double log5 = std::log(5.0);
  const double re = factor.coefficient == 1.0 ? 0.0 : std::log(9.0) / log5;
  const cplx expected(re, 2.0 * std::numbers::pi * static_cast<double>(n) / log5);
  return std::abs(pole.s - expected) <= 1e-12 * std::max(1.0, std::abs(expected));
}

}  // namespace fractal_spectra
