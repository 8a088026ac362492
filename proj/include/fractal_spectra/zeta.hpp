#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fractal_spectra/numerics.hpp"
#include "fractal_spectra/sl_operator.hpp"

namespace fractal_spectra {

struct ZetaValue {
  cplx s;
  cplx value;
  double error = 0;  // truncation-error estimate
  long long count = 0;  // terms or depth used
};

inline constexpr int kMaxPreimageDepth = 28;
inline constexpr int kDefaultPreimageDepth = 25;
/// Re(s) must exceed 2 log 2 / log 5 by this margin.
inline constexpr double kConvergenceMargin = 0.1;
inline constexpr double kNearPoleTol = 1e-8;

double preimage_convergence_abscissa();

/// sum over z in R^{-n}{z0} of (5^n z)^{-s/2}; the error estimate is the
/// change from level n-1. parallelism 0 means hardware concurrency.
ZetaValue zeta_R(double z0, cplx s, int depth = kDefaultPreimageDepth, int parallelism = 0);

/// 1 / (1 - coefficient * base^{-s/2})
struct GeometricFactor {
  double base;
  double coefficient;

  cplx denominator(cplx s) const { return 1.0 - coefficient * std::pow(cplx(base), -s / 2.0); }
  cplx operator()(cplx s) const { return 1.0 / denominator(s); }
};

inline constexpr GeometricFactor kSGFactorOne{5.0, 1.0};
inline constexpr GeometricFactor kSGFactorThree{5.0, 3.0};

/// Spectral zeta of the gasket Laplacian from the two preimage zetas:
///   Z_{3/4}(s) 5^{-s/2}/2 (1/(1-3w) + 3/(1-w)) + Z_{5/4}(s) 5^{-s}/2 (3/(1-3w) - 1/(1-w)),
/// w = 5^{-s/2}.
ZetaValue zeta_SG(cplx s, int depth = kDefaultPreimageDepth, int parallelism = 0);

/// Sum of kappa^{-s/2} over the nonzero eigenvalues of the level-m graph,
/// each pushed to its renormalized limit 5^k lambda_k along the minus branch,
/// with dense-oracle multiplicities. The error estimate is the change from
/// level m-1.
ZetaValue truncated_spectral_zeta(cplx s, int m);

inline constexpr double kMaxTailFraction = 0.1;

struct PowerLawFit {
  double coefficient = 0;  // C in lambda_j ~ C j^beta
  double exponent = 0;     // beta
};

/// Least-squares fit of log lambda_j against log j over the last decade of
/// values (j is 1-based).
PowerLawFit fit_power_law(const std::vector<double>& ascending);

/// Sum of lambda_j^{-s/2} over the roots of S plus the integral tail of the
/// fitted power law; the error estimate is the tail's magnitude.
ZetaValue zeta_S(const SLParams& params, cplx s, const GeneratingSet& S);

/// gamma^{ns/2} / (1 - gamma^{-s/2}) * zeta_S(s)
ZetaValue zeta_H_n(const SLParams& params, cplx s, int n, const GeneratingSet& S);

enum class ZetaRhoMode { Identity, Direct };

inline constexpr int kDirectOrbitDepth = 3;

/// Identity mode: zeta_H_n at n = 0. Direct mode: for p <= 3 sums
/// (gamma^p lambda)^{-s/2} over roots of the p-th orbit condition up to
/// S.lambda_max, plus gamma^{-4s/2} / (1 - gamma^{-s/2}) zeta_S for the rest.
ZetaValue zeta_rho(const SLParams& params, cplx s, const GeneratingSet& S, ZetaRhoMode mode = ZetaRhoMode::Identity);

struct RiemannCheck {
  double s;
  double lhs;  // classical zeta(s)
  double rhs;  // pi^s zeta_rho(s) at alpha = 1/2
  double abs_err;
};

inline constexpr double kRiemannLambdaMax = 3e7;
inline constexpr int kDefaultSLDepth = 18;

RiemannCheck riemann_check(double s, double lambda_max = kRiemannLambdaMax, int depth = kDefaultSLDepth);

// ---------------------------------------------------------------------------
// Hyperfunctions

struct HyperfunctionPair {
  std::function<cplx(cplx)> inner;  // analytic on |z| < 1
  std::function<cplx(cplx)> outer;  // analytic on |z| > 1
};

/// [1/(1-z), 1/(z-1)]
HyperfunctionPair delta_hyperfunction();

/// (1/2 pi i) [ integral of f outer on |z| = r_out - integral of f inner on |z| = r_in ].
cplx pairing(const HyperfunctionPair& h, const std::function<cplx(cplx)>& f, double r_in, double r_out,
             int nodes = 4096);

enum class UnboundedKind { SG, SL };
enum class HyperBranch { Inner, Outer };

struct UnboundedReport {
  UnboundedKind kind;
  cplx s;
  double base;
  HyperBranch branch;
  cplx factor_value;              // delta_T component at base^{-s/2}
  cplx opposite_value;            // the other component at the same point
  double cancellation = 0;        // |factor_value + opposite_value|
  std::optional<cplx> prefactor;  // absent outside the prefactor's convergence region
  std::optional<cplx> product;
};

struct UnboundedInput {
  UnboundedKind kind = UnboundedKind::SG;
  SLParams params{};
  const GeneratingSet* generating_set = nullptr;  // required for SL prefactors
  int sg_depth = kDefaultPreimageDepth;
};

UnboundedReport zeta_unbounded(const UnboundedInput& input, cplx s);

// ---------------------------------------------------------------------------
// Poles

struct SWindow {
  double re_min, re_max, im_min, im_max;
};

struct Pole {
  cplx s;
  long long k;  // s = (2 log coefficient + 4 pi i k) / log base
};

std::vector<Pole> pole_lattice(const GeometricFactor& factor, const SWindow& window);

/// Membership in {2 pi i n / log 5, (log 9 + 2 pi i n) / log 5 : n integer},
/// decided from the factor's integer data: n = 2k.
bool in_sg_pole_lattice(const GeometricFactor& factor, const Pole& pole);

}  // namespace fractal_spectra
