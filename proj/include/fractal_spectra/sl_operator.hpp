#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "fractal_spectra/numerics.hpp"

namespace fractal_spectra {

/// Constants of the self-similar string: Psi_1(x) = alpha x, Psi_2(x) = 1 - (1 - alpha)(1 - x),
/// measure weights (b, 1 - b), b = 1 - alpha.
struct SLParams {
  double alpha;
  double b;      // 1 - alpha
  double delta;  // alpha / (1 - alpha)
  double gamma;  // 1 / (alpha (1 - alpha))
};

SLParams make_params(double alpha);

/// Unchecked construction for the rho-dynamics regime delta > 1 (alpha > 1/2),
/// where the map is defined but the operator results are not used.
SLParams make_params_unchecked(double alpha);

inline constexpr int kMaxMeasureDepth = 24;

/// Depth-n lumping of the self-similar measure: one atom per word, placed at
/// the midpoint of its interval. Positions are increasing.
struct DiscretizedMeasure {
  int depth = 0;
  std::vector<double> positions;
  std::vector<double> masses;
};

DiscretizedMeasure discretize_measure(const SLParams& params, int n);

/// Transfer matrix of -(d/dm)(d/dx) f = lambda f across [0, 1] for the
/// depth-n lumped measure: [f(1), f'(1)] = M [f(0), f'(0)].
///
/// Both halves of [0, 1] carry a rescaled copy of the depth-(n-1) problem
/// at lambda / gamma, so
///   M_n(l) = C(1-a) M_{n-1}(l/g) C(1-a)^{-1} * C(a) M_{n-1}(l/g) C(a)^{-1},
/// with C(s) = diag(1, 1/s) and M_0 = T(1/2) K(l) T(1/2). Each level is
/// rescaled to unit determinant, which it has exactly.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> lumped_propagator(const SLParams& params, Scalar lambda, int depth) {
  using Mat = Eigen::Matrix<Scalar, 2, 2>;
  const Scalar base_lambda = lambda * std::pow(params.gamma, -depth);
  Mat m = translation_matrix(Scalar(0.5)) * kick_matrix(base_lambda) * translation_matrix(Scalar(0.5));
  const double left = params.alpha;
  const double right = 1.0 - params.alpha;
  for (int k = 0; k < depth; ++k) {
    Mat l, r;
    l << m(0, 0), left * m(0, 1), m(1, 0) / left, m(1, 1);
    r << m(0, 0), right * m(0, 1), m(1, 0) / right, m(1, 1);
    m = r * l;
    // det is exactly 1; dividing out the drift keeps it there to rounding
    m /= std::sqrt(m.determinant());
  }
  return m;
}

struct Propagator {
  Mat2C matrix;
  cplx lambda;
  int depth = 0;

  cplx a() const { return matrix(0, 0); }
  cplx b() const { return matrix(0, 1); }
  cplx c() const { return matrix(1, 0); }
  cplx d() const { return matrix(1, 1); }
  cplx determinant() const { return matrix.determinant(); }
};

Propagator propagator(const SLParams& params, cplx lambda, int depth);

/// Left-to-right product of translation and kick factors over the atoms.
Mat2C atomwise_propagator(const DiscretizedMeasure& measure, cplx lambda);

struct InvariantCurvePoint {
  ProjPoint2 point;  // [a(lambda), d(lambda), 1]
  cplx lambda;
};

InvariantCurvePoint phi(const SLParams& params, cplx lambda, int depth);

/// [x(x + y/delta) - z^2/delta, delta y (x + y/delta) - delta z^2, z^2].
ProjPoint2 rho_map(const SLParams& params, const ProjPoint2& p);

/// h(lambda) = a(lambda/gamma) + d(lambda/gamma)/delta; S is its zero set.
double generating_function(const SLParams& params, double lambda, int depth);

/// x + y/delta evaluated at rho^p(phi(gamma^{-(p+1)} lambda)), iterating rho in
/// the affine chart z = 1. For p = 0 this is generating_function.
double orbit_condition(const SLParams& params, double lambda, int p, int depth);

struct RootScan {
  std::vector<double> roots;
  int grid_points = 0;  // grid actually used after refinement
};

/// Smallest value scanned by root searches; Dirichlet eigenvalues of a unit
/// string with unit mass are at least 4.
inline constexpr double kRootScanFloor = 1.0;

/// Sign-change roots of f on a geometric grid over [lo, hi], certified by a
/// 4x refined recount of every cell; the grid is refined by 4 up to three
/// times before GridTooCoarse.
RootScan find_simple_roots(const std::function<double(double)>& f, double lo, double hi, int grid_points,
                           double max_ratio, double tol);

struct GeneratingSet {
  SLParams params;
  std::vector<double> roots;
  double lambda_max = 0;
  int depth = 0;
  int grid_points = 0;
};

GeneratingSet generating_set(const SLParams& params, double lambda_max, int grid_points, int depth,
                             double root_tol = Tolerances{}.root_tol);

inline constexpr int kInfiniteBlowup = -1;
inline constexpr int kDefaultFloorPowers = 8;

struct LadderValue {
  double value;
  int k;  // 1-based index into S
  int p;  // power of gamma
};

struct SpectrumLadder {
  int blowup = 0;  // n, or kInfiniteBlowup
  double lambda_max = 0;
  double floor = 0;  // smallest admissible value (infinite ladder only)
  std::vector<LadderValue> values;
};

/// {gamma^p lambda_k <= lambda_max : lambda_k in S, p >= -n}. For the
/// infinite blow-up every p is allowed above floor = gamma^{-floor_powers} lambda_1;
/// that ladder is infinite below lambda_max, so it is reported for the
/// computed roots of S only.
SpectrumLadder ladder_spectrum(const SLParams& params, int n, double lambda_max, const GeneratingSet& s,
                               int floor_powers = kDefaultFloorPowers);

struct EigenfunctionSamples {
  std::vector<double> x;
  std::vector<double> f;
  double terminal = 0;  // |f| at the right endpoint
  double max_abs = 0;
};

inline constexpr double kEigenfunctionCertificate = 1e-6;

/// Integrates the lumped problem on [0, alpha^{-n}] from f(0) = 0, f'(0) = 1
/// and samples f at 0, at every atom and at the right endpoint.
EigenfunctionSamples sl_eigenfunction(const SLParams& params, double lambda, int n_blowup, int depth);

/// max |D_alpha M(gamma l) D_{1/alpha} - D_delta M(l) D_{1/delta} M(l)|, both
/// sides at the same depth.
double propagator_selfsimilar_check(const SLParams& params, cplx lambda, int depth);

}  // namespace fractal_spectra
