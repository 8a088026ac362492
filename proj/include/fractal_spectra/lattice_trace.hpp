#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "fractal_spectra/numerics.hpp"

namespace fractal_spectra {

inline constexpr int kMaxBlowupLevel = 6;

/// Level-n blow-up of the gasket: the level-n graph scaled by 2^n, with the
/// three outer corners as boundary.
struct LatticeGraph {
  int level = 0;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::pair<int, int>> edges;
  std::array<int, 3> boundary{0, 1, 2};
  std::vector<double> masses;  // 1 on the boundary, 2 inside

  int vertex_count() const { return static_cast<int>(vertices.size()); }
};

LatticeGraph blowup_graph(int n);

/// u1 I + ((u0 - u1)/3) J on three points.
struct SymGForm {
  cplx u0;
  cplx u1;

  Eigen::Matrix3cd matrix() const;
};

/// Vertex order of F_<1>: corners 0, 1, 2, then the junctions 3 (between 0
/// and 1), 4 (between 1 and 2), 5 (between 2 and 0).
inline constexpr std::array<std::array<int, 3>, 3> kQ1Triangles{{{0, 3, 5}, {3, 1, 4}, {5, 4, 2}}};

Eigen::MatrixXcd assemble_Q1(const SymGForm& q);

struct TraceResult {
  Eigen::MatrixXcd schur;
  cplx u0;  // row sum
  cplx u1;  // diagonal minus off-diagonal
  double invariance_residual = 0;  // max |P M P^T - M| over corner permutations
  bool invariant = false;
  cplx interior_determinant;
};

inline constexpr double kInvarianceTol = 1e-10;

/// Q_BB - Q_BI Q_II^{-1} Q_IB. The (u0, u1) readout is meaningful when the
/// result is invariant (three boundary points).
TraceResult schur_trace(const Eigen::MatrixXcd& m, const std::vector<int>& boundary);

/// (3 u0 u1 / (2 u0 + u1), u1 (u0 + u1) / (5 u1 + u0)).
std::pair<cplx, cplx> trace_map_closed_form(cplx u0, cplx u1);

/// [z0 : z1] -> [z0 (5 z1 + z0) : (2 z0 + z1)(z0 + z1)].
ProjPoint1 g_map(const ProjPoint1& p);

struct ConjugacyResiduals {
  double literal = 0;       // |M(g(z)) - G(M(z))|
  double substitution = 0;  // |g(z) - G(M(z))|
  double conjugacy = 0;     // |M(g(z)) - p(M(z))|
  double affine = 0;        // |p(-2z) + 2R(z)|
};

/// Affine-chart maps with M(z) = 3z/(1-z), g(z) = z(5+z)/((2z+1)(z+1)),
/// G(v) = 3v(2v+5)/((3v+3)(2v+3)), p(v) = v(2v+5), R(z) = z(5-4z).
ConjugacyResiduals conjugacy_checks(cplx z);

/// |p(-2z) + 2R(z)|; defined everywhere.
double affine_conjugacy_residual(cplx z);

}  // namespace fractal_spectra
