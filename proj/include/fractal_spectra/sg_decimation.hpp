#pragma once

#include <array>
#include <vector>

#include "fractal_spectra/numerics.hpp"
#include "fractal_spectra/sg_graph.hpp"

namespace fractal_spectra {

/// R(z) = z (5 - 4 z); R(0) = 0 and R'(0) = 5.
inline constexpr double kDecimationScale = 5.0;
inline constexpr std::array<double, 3> kForbiddenEigenvalues{0.5, 1.25, 1.5};

template <typename Scalar>
Scalar apply_R(Scalar z) {
  return z * (Scalar(5) - Scalar(4) * z);
}

struct InverseBranches {
  cplx minus;  // (5 - sqrt(25 - 16 z)) / 8
  cplx plus;   // (5 + sqrt(25 - 16 z)) / 8
};

/// Both preimages under R, principal square root. The minus branch is
/// evaluated as 2z / (5 + sqrt(25 - 16z)) to avoid cancellation near 0.
InverseBranches inverse_branches(cplx z);

/// Real branch for z <= 25/16; sign is -1 or +1.
double inverse_branch(double z, int sign);

bool is_forbidden(double value, double tol = kMultiplicityGroupTol);

enum class Branch { Initial, Minus, Plus };

struct DecimationEntry {
  double value;
  int multiplicity;
  int parent;  // index into the previous level, -1 for initial entries
  Branch branch;
};

/// Level-by-level spectra of -Delta_m linked by inverse branches of R.
struct DecimationTree {
  std::vector<std::vector<DecimationEntry>> levels;

  SpectrumMultiset spectrum(int level) const;
  int depth() const { return static_cast<int>(levels.size()) - 1; }
};

inline constexpr int kMaxOracleDecimationLevel = 4;
inline constexpr int kMaxDecimationLevel = 6;

/// Builds the tree up to level m. Continued entries come from both inverse
/// branches of every previous-level entry (images landing in the forbidden
/// set are dropped); initial entries are the forbidden values, with
/// multiplicities harvested per level. With `oracle` set, multiplicities come
/// from the dense Jacobi spectrum and every level is checked against it
/// (DecimationMismatch on disagreement); otherwise they come from the kernel
/// dimension of -Delta_m - beta via rank-revealing QR.
DecimationTree generate_graph_spectrum(int m, bool oracle);

struct DecimationStepReport {
  int level = 0;             // m: restriction from V_{m+1} to V_m
  double max_residual = 0;   // max relative residual over checked pairs
  int checked = 0;
  int skipped_vanishing = 0; // restriction identically zero
  int skipped_forbidden = 0;
};

inline constexpr double kDecimationResidualTol = 1e-8;

/// For every eigenpair (lambda, u) of -Delta_{m+1} with lambda outside the
/// forbidden set, measures |(-Delta_m) u|_{V_m} - R(lambda) u|_{V_m}| / |u|_{V_m}|.
DecimationStepReport verify_decimation_step(int m);

/// lambda_{m0} = seed, lambda_{m+1} = R_{eps_m}^{-1}(lambda_m); eps follows
/// `signs` and then `tail_sign` forever.
struct EigenSequence {
  int m0 = 0;
  double seed = 1.5;
  std::vector<int> signs;
  int tail_sign = -1;
};

inline constexpr int kLimitIterationCap = 10000;

/// 5^m lambda_m once the relative change stays at most tol for two steps.
double limit_eigenvalue(const EigenSequence& seq, double tol);

}  // namespace fractal_spectra
