#pragma once

#include <Eigen/Dense>

#include <array>
#include <utility>
#include <vector>

#include "fractal_spectra/numerics.hpp"

namespace fractal_spectra {

inline constexpr int kMaxGraphLevel = 8;
inline constexpr int kMaxOracleVertices = 2000;

/// Level-m graph approximation of the Sierpinski gasket.
///
/// Vertices are numbered so that V_{m-1} is a prefix of V_m: the three corners
/// of V_0 come first, then each refinement appends the edge midpoints of the
/// previous level's cells. `midpoint_of[k]` records, for every non-corner
/// vertex k, the cell edge (p, q) it bisects and the opposite corner r of
/// that cell.
struct SGLevelGraph {
  struct Midpoint {
    int p, q, r;
  };

  int level = 0;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::pair<int, int>> edges;
  std::array<int, 3> boundary{0, 1, 2};
  std::vector<std::array<int, 3>> cells;  // m-cells, corners in IFS order
  std::vector<Midpoint> midpoint_of;      // indexed by vertex - 3

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  std::vector<int> degrees() const;
  Eigen::MatrixXd adjacency() const;
};

struct VertexFunction {
  int level = 0;
  Eigen::VectorXd values;
};

/// Sorted (eigenvalue, multiplicity) pairs.
struct SpectrumMultiset {
  struct Entry {
    double value;
    int multiplicity;
  };
  std::vector<Entry> entries;

  int total_multiplicity() const;
  /// Multiplicity of the entry within tol of value, 0 if none.
  int multiplicity_of(double value, double tol) const;
  bool contains(double value, double tol) const { return multiplicity_of(value, tol) > 0; }
};

struct EigenPair {
  double value;
  Eigen::VectorXd vector;  // function on V_m, unit norm in the degree inner product
};

inline constexpr double kMultiplicityGroupTol = 1e-8;
inline constexpr double kJacobiOffNormTol = 1e-13;

SGLevelGraph build_level_graph(int m);

/// Symmetrized matrix D^{1/2} (I - D^{-1} A) D^{-1/2} of -Delta_m.
Eigen::MatrixXd laplacian_matrix(const SGLevelGraph& g);

/// I - D^{-1} A, the operator -Delta_m acting on vertex functions.
Eigen::MatrixXd laplacian_operator(const SGLevelGraph& g);

/// Groups an ascending list of eigenvalues into a multiset; consecutive values
/// within tol belong to the same group, whose value is the group mean.
SpectrumMultiset group_eigenvalues(const Eigen::VectorXd& ascending, double tol = kMultiplicityGroupTol);

SpectrumMultiset dense_spectrum(const SGLevelGraph& g);
std::vector<EigenPair> eigenpairs(const SGLevelGraph& g);

/// Spectrum of the interior block of -Delta_m (boundary values fixed at 0).
SpectrumMultiset interior_spectrum(const SGLevelGraph& g);

VertexFunction harmonic_extend(const std::array<double, 3>& boundary, int m);

double graph_energy(const SGLevelGraph& g, const Eigen::VectorXd& u);
double graph_energy(const VertexFunction& u);

}  // namespace fractal_spectra
