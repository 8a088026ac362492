#include "fractal_spectra/sg_decimation.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace fractal_spectra {

InverseBranches inverse_branches(cplx z) {
  const cplx root = std::sqrt(cplx(25.0) - 16.0 * z);
  return {2.0 * z / (5.0 + root), (5.0 + root) / 8.0};
}

double inverse_branch(double z, int sign) {
  if (z > 25.0 / 16.0) throw Error(ErrorKind::InvalidArgument, "real inverse branch requires z <= 25/16");
  const double root = std::sqrt(25.0 - 16.0 * z);
  return sign < 0 ? 2.0 * z / (5.0 + root) : (5.0 + root) / 8.0;
}

bool is_forbidden(double value, double tol) {
  return std::any_of(kForbiddenEigenvalues.begin(), kForbiddenEigenvalues.end(),
                     [&](double b) { return std::abs(value - b) <= tol; });
}

SpectrumMultiset DecimationTree::spectrum(int level) const {
  SpectrumMultiset out;
  for (const auto& e : levels.at(static_cast<std::size_t>(level))) out.entries.push_back({e.value, e.multiplicity});
  return out;
}

namespace {

int kernel_dimension(const Eigen::MatrixXd& sym, double shift) {
  const Eigen::Index n = sym.rows();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sym - shift * Eigen::MatrixXd::Identity(n, n));
  qr.setThreshold(1e-10);
  return static_cast<int>(n - qr.rank());
}

void compare_with_oracle(int level, const std::vector<DecimationEntry>& entries, const SpectrumMultiset& dense) {
  constexpr double tol = 1e-9;
  std::ostringstream why;
  bool ok = entries.size() == dense.entries.size();
  if (!ok) why << "entry count " << entries.size() << " vs oracle " << dense.entries.size();
  for (std::size_t i = 0; ok && i < entries.size(); ++i) {
    const auto& e = entries[i];
    const auto& d = dense.entries[i];
    if (std::abs(e.value - d.value) > tol || e.multiplicity != d.multiplicity) {
      ok = false;
      why << "entry " << i << ": decimation (" << e.value << ", " << e.multiplicity << ") vs oracle (" << d.value
          << ", " << d.multiplicity << ")";
    }
  }
  if (!ok) {
    throw Error(ErrorKind::DecimationMismatch, "level " + std::to_string(level) + ": " + why.str());
  }
}

}  // namespace

DecimationTree generate_graph_spectrum(int m, bool oracle) {
  const int cap = oracle ? kMaxOracleDecimationLevel : kMaxDecimationLevel;
  if (m < 0 || m > cap) {
    throw Error(ErrorKind::LevelTooLarge, "decimation level must lie in [0, " + std::to_string(cap) + "]");
  }

  DecimationTree tree;
  for (int level = 0; level <= m; ++level) {
    const SGLevelGraph g = build_level_graph(level);
    SpectrumMultiset dense;
    Eigen::MatrixXd sym;
    if (oracle) {
      dense = dense_spectrum(g);
    } else {
      sym = laplacian_matrix(g);
    }
    auto harvest = [&](double beta) {
      return oracle ? dense.multiplicity_of(beta, kMultiplicityGroupTol) : kernel_dimension(sym, beta);
    };

    std::vector<DecimationEntry> entries;
    if (level == 0) {
      for (double beta : {0.0, 1.5}) {
        if (const int mult = harvest(beta); mult > 0) entries.push_back({beta, mult, -1, Branch::Initial});
      }
    } else {
      const auto& prev = tree.levels.back();
      for (std::size_t parent = 0; parent < prev.size(); ++parent) {
        for (int sign : {-1, +1}) {
          const double v = inverse_branch(prev[parent].value, sign);
          if (is_forbidden(v)) continue;
          entries.push_back({v, prev[parent].multiplicity, static_cast<int>(parent),
                             sign < 0 ? Branch::Minus : Branch::Plus});
        }
      }
      for (double beta : kForbiddenEigenvalues) {
        if (const int mult = harvest(beta); mult > 0) entries.push_back({beta, mult, -1, Branch::Initial});
      }
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const DecimationEntry& a, const DecimationEntry& b) { return a.value < b.value; });
    if (oracle) compare_with_oracle(level, entries, dense);
    tree.levels.push_back(std::move(entries));
  }
  return tree;
}

DecimationStepReport verify_decimation_step(int m) {
  if (m < 0 || m + 1 > kMaxDecimationLevel) {
    throw Error(ErrorKind::LevelTooLarge, "restriction check needs 0 <= m < " + std::to_string(kMaxDecimationLevel));
  }
  const SGLevelGraph fine = build_level_graph(m + 1);
  const SGLevelGraph coarse = build_level_graph(m);
  const Eigen::MatrixXd coarse_op = laplacian_operator(coarse);
  const Eigen::Index n = coarse.vertex_count();

  DecimationStepReport report;
  report.level = m;
  for (const auto& pair : eigenpairs(fine)) {
    if (is_forbidden(pair.value)) {
      ++report.skipped_forbidden;
      continue;
    }
    // V_m is a prefix of V_{m+1}
    const Eigen::VectorXd restricted = pair.vector.head(n);
    const double norm = restricted.norm();
    if (norm <= 1e-10 * pair.vector.norm()) {
      ++report.skipped_vanishing;
      continue;
    }
    const double residual = (coarse_op * restricted - apply_R(pair.value) * restricted).norm() / norm;
    report.max_residual = std::max(report.max_residual, residual);
    ++report.checked;
  }
  return report;
}

double limit_eigenvalue(const EigenSequence& seq, double tol) {
  if (seq.tail_sign > 0) {
    throw Error(ErrorKind::DivergentSequence, "an all-plus tail has no renormalized limit");
  }
  if (seq.tail_sign != -1) throw Error(ErrorKind::InvalidSequence, "tail sign must be -1 or +1");
  if (!is_forbidden(seq.seed, 1e-12)) {
    throw Error(ErrorKind::InvalidSequence, "seed must be one of the forbidden values 1/2, 5/4, 3/2");
  }
  if (seq.m0 < 0) throw Error(ErrorKind::InvalidSequence, "generation level must be non-negative");
  for (int s : seq.signs) {
    if (s != -1 && s != 1) throw Error(ErrorKind::InvalidSequence, "signs must be -1 or +1");
  }

  // Track v_m = 5^m lambda_m directly; lambda_m itself underflows long before
  // the iteration cap.
  double lambda = seq.seed;
  double value = std::pow(kDecimationScale, seq.m0) * lambda;
  int settled = 0;
  for (int step = 0; step < kLimitIterationCap; ++step) {
    const bool in_prefix = step < static_cast<int>(seq.signs.size());
    const int sign = in_prefix ? seq.signs[static_cast<std::size_t>(step)] : seq.tail_sign;
    const double root = std::sqrt(25.0 - 16.0 * lambda);
    double next_value;
    if (sign < 0) {
      next_value = value * (10.0 / (5.0 + root));  // 5 R_-(l) / l
      lambda = 2.0 * lambda / (5.0 + root);
    } else {
      const double next = (5.0 + root) / 8.0;
      next_value = value * kDecimationScale * next / lambda;
      lambda = next;
    }
    if (!std::isfinite(next_value)) throw Error(ErrorKind::NumericOverflow, "renormalized value overflowed");
    const double rel = std::abs(next_value - value) / std::abs(next_value);
    value = next_value;
    if (in_prefix) continue;
    settled = (tol > 0 && rel <= tol) ? settled + 1 : 0;
    if (settled >= 2) return value;
  }
  throw Error(ErrorKind::DivergentSequence,
              "no convergence within " + std::to_string(kLimitIterationCap) + " iterations");
}

}  // namespace fractal_spectra
