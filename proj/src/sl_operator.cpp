#include "fractal_spectra/sl_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fractal_spectra {

SLParams make_params_unchecked(double alpha) {
  return {alpha, 1.0 - alpha, alpha / (1.0 - alpha), 1.0 / (alpha * (1.0 - alpha))};
}

SLParams make_params(double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5)) {
    throw Error(ErrorKind::UnsupportedAlpha, "alpha must lie in (0, 1/2], got " + std::to_string(alpha));
  }
  return make_params_unchecked(alpha);
}

namespace {

void check_depth(int depth, int min_depth) {
  if (depth < min_depth || depth > kMaxMeasureDepth) {
    throw Error(ErrorKind::DepthTooLarge, "depth must lie in [" + std::to_string(min_depth) + ", " +
                                              std::to_string(kMaxMeasureDepth) + "], got " + std::to_string(depth));
  }
}

}  // namespace

DiscretizedMeasure discretize_measure(const SLParams& params, int n) {
  check_depth(n, 1);
  struct Cell {
    double lo, hi, mass;
  };
  std::vector<Cell> cells{{0.0, 1.0, 1.0}};
  for (int level = 0; level < n; ++level) {
    std::vector<Cell> next;
    next.reserve(cells.size() * 2);
    for (const auto& c : cells) {
      const double cut = c.lo + params.alpha * (c.hi - c.lo);
      next.push_back({c.lo, cut, c.mass * params.b});
      next.push_back({cut, c.hi, c.mass * (1.0 - params.b)});
    }
    cells = std::move(next);
  }
  DiscretizedMeasure out;
  out.depth = n;
  out.positions.reserve(cells.size());
  out.masses.reserve(cells.size());
  for (const auto& c : cells) {
    out.positions.push_back(0.5 * (c.lo + c.hi));
    out.masses.push_back(c.mass);
  }
  return out;
}

Propagator propagator(const SLParams& params, cplx lambda, int depth) {
  check_depth(depth, 0);
  Propagator p{lumped_propagator<cplx>(params, lambda, depth), lambda, depth};
  for (int i = 0; i < 4; ++i) {
    if (!is_finite(p.matrix(i / 2, i % 2))) {
      throw Error(ErrorKind::NumericOverflow, "propagator entries overflowed");
    }
  }
  return p;
}

Mat2C atomwise_propagator(const DiscretizedMeasure& measure, cplx lambda) {
  Mat2C m = Mat2C::Identity();
  double x = 0.0;
  for (std::size_t i = 0; i < measure.positions.size(); ++i) {
    m = translation_matrix(cplx(measure.positions[i] - x)) * m;
    m = kick_matrix(lambda * measure.masses[i]) * m;
    x = measure.positions[i];
  }
  return translation_matrix(cplx(1.0 - x)) * m;
}

InvariantCurvePoint phi(const SLParams& params, cplx lambda, int depth) {
  const Propagator p = propagator(params, lambda, depth);
  return {proj_normalize(ProjPoint2::of(p.a(), p.d(), 1.0)), lambda};
}

ProjPoint2 rho_map(const SLParams& params, const ProjPoint2& p) {
  const ProjPoint2 q = proj_normalize(p);
  const cplx x = q[0], y = q[1], z = q[2];
  const double inv_delta = 1.0 / params.delta;
  const cplx s = x + inv_delta * y;
  ProjPoint2::Coords image;
  image << x * s - inv_delta * z * z, params.delta * y * s - params.delta * z * z, z * z;
  if (image.cwiseAbs().maxCoeff() <= 1e-14) {
    throw Error(ErrorKind::IndeterminacyPoint, "rho is undefined at [1, -delta, 0]");
  }
  return proj_normalize(ProjPoint2(image));
}

double generating_function(const SLParams& params, double lambda, int depth) {
  const auto m = lumped_propagator<double>(params, lambda / params.gamma, depth);
  return m(0, 0) + m(1, 1) / params.delta;
}

double orbit_condition(const SLParams& params, double lambda, int p, int depth) {
  const auto m = lumped_propagator<double>(params, lambda * std::pow(params.gamma, -(p + 1)), depth);
  double x = m(0, 0);
  double y = m(1, 1);
  const double inv_delta = 1.0 / params.delta;
  for (int i = 0; i < p; ++i) {
    const double s = x + inv_delta * y;
    const double nx = x * s - inv_delta;
    const double ny = params.delta * y * s - params.delta;
    x = nx;
    y = ny;
  }
  return x + inv_delta * y;
}

namespace {

int sign_changes(const std::vector<double>& values) {
  int count = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if ((values[i - 1] < 0.0) != (values[i] < 0.0)) ++count;
  }
  return count;
}

}  // namespace

RootScan find_simple_roots(const std::function<double(double)>& f, double lo, double hi, int grid_points,
                           double max_ratio, double tol) {
  if (!(lo > 0.0 && hi > lo)) throw Error(ErrorKind::InvalidArgument, "root scan needs 0 < lo < hi");
  if (grid_points < 2) throw Error(ErrorKind::InvalidArgument, "root scan needs at least two grid points");
  const double span = std::log(hi / lo);
  int points = std::max(grid_points, static_cast<int>(std::ceil(span / std::log(max_ratio))) + 1);

  for (int attempt = 0; attempt < 4; ++attempt, points *= 4) {
    std::vector<double> grid(static_cast<std::size_t>(points));
    std::vector<double> values(grid.size());
    for (int i = 0; i < points; ++i) {
      grid[static_cast<std::size_t>(i)] = i == points - 1 ? hi : lo * std::exp(span * i / (points - 1));
      values[static_cast<std::size_t>(i)] = f(grid[static_cast<std::size_t>(i)]);
    }

    // Recount every cell on a 4x finer grid; a cell whose recount differs
    // from its coarse count hides a root pair.
    bool certified = true;
    std::vector<std::pair<double, double>> brackets;
    for (std::size_t i = 0; i + 1 < grid.size() && certified; ++i) {
      const double ratio = grid[i + 1] / grid[i];
      std::vector<double> sub_x{grid[i]}, sub_f{values[i]};
      for (int j = 1; j < 4; ++j) {
        sub_x.push_back(grid[i] * std::pow(ratio, j / 4.0));
        sub_f.push_back(f(sub_x.back()));
      }
      sub_x.push_back(grid[i + 1]);
      sub_f.push_back(values[i + 1]);
      const int coarse = (values[i] < 0.0) != (values[i + 1] < 0.0) ? 1 : 0;
      const int fine = sign_changes(sub_f);
      if (fine != coarse) {
        certified = false;
        break;
      }
      if (coarse == 1) {
        for (std::size_t j = 0; j + 1 < sub_f.size(); ++j) {
          if ((sub_f[j] < 0.0) != (sub_f[j + 1] < 0.0)) brackets.emplace_back(sub_x[j], sub_x[j + 1]);
        }
      }
    }
    if (!certified) continue;

    RootScan out;
    out.grid_points = points;
    for (const auto& [a, b] : brackets) out.roots.push_back(bisect_root(f, a, b, tol));
    return out;
  }
  throw Error(ErrorKind::GridTooCoarse, "sign changes not certified after three 4x refinements");
}

GeneratingSet generating_set(const SLParams& params, double lambda_max, int grid_points, int depth,
                             double root_tol) {
  if (!(lambda_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda_max must be positive");
  check_depth(depth, 0);
  GeneratingSet s{params, {}, lambda_max, depth, grid_points};
  if (lambda_max <= kRootScanFloor) return s;
  // at least 8 grid points per factor gamma
  const double max_ratio = std::pow(params.gamma, 1.0 / 8.0);
  // Roots are densest for the Lebesgue string (spacing 2 pi in sqrt(lambda));
  // aim for about 8 cells per root there.
  const double density = 8.0 * std::sqrt(lambda_max) / (2.0 * std::numbers::pi) * std::log(lambda_max / kRootScanFloor);
  const int points = std::max(grid_points, static_cast<int>(std::min(density, 5e7)));
  const auto scan = find_simple_roots([&](double l) { return generating_function(params, l, depth); },
                                      kRootScanFloor, lambda_max, points, max_ratio, root_tol);
  s.roots = scan.roots;
  s.grid_points = scan.grid_points;
  return s;
}

SpectrumLadder ladder_spectrum(const SLParams& params, int n, double lambda_max, const GeneratingSet& s,
                               int floor_powers) {
  if (!(lambda_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda_max must be positive");
  SpectrumLadder ladder;
  ladder.blowup = n;
  ladder.lambda_max = lambda_max;
  const double slack = 1.0 + 1e-12;

  if (n == kInfiniteBlowup) {
    if (params.alpha >= 0.5) {
      throw Error(ErrorKind::UnsupportedAlpha, "the infinite blow-up ladder needs alpha < 1/2");
    }
    if (s.roots.empty() || s.lambda_max * slack < lambda_max) {
      throw Error(ErrorKind::CoverageError, "generating set must cover lambda_max for the infinite ladder");
    }
    if (floor_powers < 0) throw Error(ErrorKind::InvalidArgument, "floor powers must be non-negative");
    ladder.floor = std::pow(params.gamma, -floor_powers) * s.roots.front();
  } else {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "blow-up level must be non-negative");
    if (s.lambda_max * slack < std::pow(params.gamma, n) * lambda_max) {
      throw Error(ErrorKind::CoverageError, "generating set must cover gamma^n * lambda_max = " +
                                                std::to_string(std::pow(params.gamma, n) * lambda_max));
    }
  }

  for (std::size_t k = 0; k < s.roots.size(); ++k) {
    const double root = s.roots[k];
    int p = n == kInfiniteBlowup ? static_cast<int>(std::ceil(std::log(ladder.floor / root) / std::log(params.gamma)))
                                 : -n;
    if (n == kInfiniteBlowup) {
      while (std::pow(params.gamma, p) * root < ladder.floor) ++p;
      while (p > -10000 && std::pow(params.gamma, p - 1) * root >= ladder.floor) --p;
    }
    for (;; ++p) {
      const double v = std::pow(params.gamma, p) * root;
      if (v > lambda_max) break;
      ladder.values.push_back({v, static_cast<int>(k) + 1, p});
    }
  }
  std::stable_sort(ladder.values.begin(), ladder.values.end(),
                   [](const LadderValue& a, const LadderValue& b) { return a.value < b.value; });
  return ladder;
}

EigenfunctionSamples sl_eigenfunction(const SLParams& params, double lambda, int n_blowup, int depth) {
  if (n_blowup < 0) throw Error(ErrorKind::InvalidArgument, "blow-up level must be non-negative");
  const DiscretizedMeasure measure = discretize_measure(params, depth);
  const double length = std::pow(params.alpha, -n_blowup);
  const double mass_scale = std::pow(1.0 - params.alpha, -n_blowup);

  EigenfunctionSamples out;
  out.x.reserve(measure.positions.size() + 2);
  out.f.reserve(measure.positions.size() + 2);
  double x = 0.0, f = 0.0, fp = 1.0;
  out.x.push_back(0.0);
  out.f.push_back(0.0);
  for (std::size_t i = 0; i < measure.positions.size(); ++i) {
    const double xi = measure.positions[i] * length;
    f += fp * (xi - x);
    x = xi;
    out.x.push_back(x);
    out.f.push_back(f);
    fp -= lambda * measure.masses[i] * mass_scale * f;
  }
  f += fp * (length - x);
  out.x.push_back(length);
  out.f.push_back(f);

  for (double v : out.f) out.max_abs = std::max(out.max_abs, std::abs(v));
  out.terminal = std::abs(f);
  if (!std::isfinite(out.max_abs) || out.terminal > kEigenfunctionCertificate * out.max_abs) {
    throw Error(ErrorKind::NotAnEigenvalue, "terminal value " + std::to_string(out.terminal) +
                                                " exceeds 1e-6 of max |f| = " + std::to_string(out.max_abs));
  }
  return out;
}

double propagator_selfsimilar_check(const SLParams& params, cplx lambda, int depth) {
  const Mat2C big = propagator(params, params.gamma * lambda, depth).matrix;
  const Mat2C small = propagator(params, lambda, depth).matrix;
  const Mat2C lhs = dilation_matrix(cplx(params.alpha)) * big * dilation_matrix(cplx(1.0 / params.alpha));
  const Mat2C rhs =
      dilation_matrix(cplx(params.delta)) * small * dilation_matrix(cplx(1.0 / params.delta)) * small;
  return max_abs_entry(lhs - rhs);
}

}  // namespace fractal_spectra
