#include "fractal_spectra/sg_graph.hpp"

#include <cmath>
#include <string>

namespace fractal_spectra {

std::vector<int> SGLevelGraph::degrees() const {
  std::vector<int> deg(vertices.size(), 0);
  for (const auto& [i, j] : edges) {
    ++deg[static_cast<std::size_t>(i)];
    ++deg[static_cast<std::size_t>(j)];
  }
  return deg;
}

Eigen::MatrixXd SGLevelGraph::adjacency() const {
  const int n = vertex_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : edges) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return a;
}

int SpectrumMultiset::total_multiplicity() const {
  int total = 0;
  for (const auto& e : entries) total += e.multiplicity;
  return total;
}

int SpectrumMultiset::multiplicity_of(double value, double tol) const {
  for (const auto& e : entries) {
    if (std::abs(e.value - value) <= tol) return e.multiplicity;
  }
  return 0;
}

SGLevelGraph build_level_graph(int m) {
  if (m < 0 || m > kMaxGraphLevel) {
    throw Error(ErrorKind::LevelTooLarge, "level must lie in [0, " + std::to_string(kMaxGraphLevel) + "], got " +
                                              std::to_string(m));
  }
  SGLevelGraph g;
  g.level = m;
  g.vertices = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.5, std::sqrt(3.0) / 2.0)};
  g.cells = {{0, 1, 2}};

  // Refinement applies Phi_0, Phi_1, Phi_2 to each cell. Cells only share
  // corners, never edges, so every edge midpoint is a fresh vertex.
  for (int level = 0; level < m; ++level) {
    std::vector<std::array<int, 3>> refined;
    refined.reserve(g.cells.size() * 3);
    for (const auto& [a, b, c] : g.cells) {
      const int ab = g.vertex_count();
      const int bc = ab + 1;
      const int ca = ab + 2;
      g.vertices.push_back(0.5 * (g.vertices[a] + g.vertices[b]));
      g.vertices.push_back(0.5 * (g.vertices[b] + g.vertices[c]));
      g.vertices.push_back(0.5 * (g.vertices[c] + g.vertices[a]));
      g.midpoint_of.push_back({a, b, c});
      g.midpoint_of.push_back({b, c, a});
      g.midpoint_of.push_back({c, a, b});
      refined.push_back({a, ab, ca});
      refined.push_back({ab, b, bc});
      refined.push_back({ca, bc, c});
    }
    g.cells = std::move(refined);
  }

  g.edges.reserve(g.cells.size() * 3);
  for (const auto& [a, b, c] : g.cells) {
    g.edges.emplace_back(a, b);
    g.edges.emplace_back(b, c);
    g.edges.emplace_back(c, a);
  }
  return g;
}

Eigen::MatrixXd laplacian_matrix(const SGLevelGraph& g) {
  const auto deg = g.degrees();
  const int n = g.vertex_count();
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
  for (const auto& [i, j] : g.edges) {
    const double w = 1.0 / std::sqrt(static_cast<double>(deg[i]) * deg[j]);
    l(i, j) -= w;
    l(j, i) -= w;
  }
  return l;
}

Eigen::MatrixXd laplacian_operator(const SGLevelGraph& g) {
  const auto deg = g.degrees();
  const int n = g.vertex_count();
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
  for (const auto& [i, j] : g.edges) {
    l(i, j) -= 1.0 / deg[i];
    l(j, i) -= 1.0 / deg[j];
  }
  return l;
}

SpectrumMultiset group_eigenvalues(const Eigen::VectorXd& ascending, double tol) {
  SpectrumMultiset out;
  double group_sum = 0.0;
  for (Eigen::Index k = 0; k < ascending.size(); ++k) {
    const double x = ascending[k];
    if (!out.entries.empty() && x - ascending[k - 1] <= tol) {
      auto& last = out.entries.back();
      group_sum += x;
      ++last.multiplicity;
      last.value = group_sum / last.multiplicity;
    } else {
      out.entries.push_back({x, 1});
      group_sum = x;
    }
  }
  return out;
}

namespace {

void check_oracle_size(const SGLevelGraph& g) {
  if (g.vertex_count() > kMaxOracleVertices) {
    throw Error(ErrorKind::LevelTooLarge, "dense oracle limited to " + std::to_string(kMaxOracleVertices) +
                                              " vertices, level " + std::to_string(g.level) + " has " +
                                              std::to_string(g.vertex_count()));
  }
}

}  // namespace

SpectrumMultiset dense_spectrum(const SGLevelGraph& g) {
  check_oracle_size(g);
  const auto eig = jacobi_eigensolve<double>(laplacian_matrix(g), kJacobiOffNormTol, false);
  auto out = group_eigenvalues(eig.values);
  // constants span the kernel exactly
  if (!out.entries.empty() && std::abs(out.entries.front().value) <= 1e-12) out.entries.front().value = 0.0;
  return out;
}

std::vector<EigenPair> eigenpairs(const SGLevelGraph& g) {
  check_oracle_size(g);
  const auto eig = jacobi_eigensolve<double>(laplacian_matrix(g), kJacobiOffNormTol, true);
  const auto deg = g.degrees();
  Eigen::VectorXd inv_sqrt_deg(g.vertex_count());
  for (int i = 0; i < g.vertex_count(); ++i) inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(deg[i]));

  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(eig.values.size()));
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    // v eigenvector of the symmetrized matrix  =>  D^{-1/2} v eigenvector of I - D^{-1} A
    out.push_back({eig.values[k], eig.vectors.col(k).cwiseProduct(inv_sqrt_deg)});
  }
  return out;
}

SpectrumMultiset interior_spectrum(const SGLevelGraph& g) {
  check_oracle_size(g);
  const int n = g.vertex_count() - 3;
  if (n == 0) return {};
  // the boundary occupies indices 0, 1, 2
  const Eigen::MatrixXd block = laplacian_matrix(g).bottomRightCorner(n, n);
  return group_eigenvalues(jacobi_eigensolve<double>(block, kJacobiOffNormTol, false).values);
}

VertexFunction harmonic_extend(const std::array<double, 3>& boundary, int m) {
  const SGLevelGraph g = build_level_graph(m);
  VertexFunction u{m, Eigen::VectorXd(g.vertex_count())};
  for (int i = 0; i < 3; ++i) u.values[i] = boundary[static_cast<std::size_t>(i)];
  // midpoints are numbered after their parents, so one forward pass suffices
  for (int k = 3; k < g.vertex_count(); ++k) {
    const auto& mp = g.midpoint_of[static_cast<std::size_t>(k - 3)];
    u.values[k] = 0.4 * (u.values[mp.p] + u.values[mp.q]) + 0.2 * u.values[mp.r];
  }
  return u;
}

double graph_energy(const SGLevelGraph& g, const Eigen::VectorXd& u) {
  if (u.size() != g.vertex_count()) {
    throw Error(ErrorKind::InvalidArgument, "vertex function length does not match the graph");
  }
  CompensatedSum<double> acc;
  for (const auto& [i, j] : g.edges) {
    const double d = u[i] - u[j];
    acc.add(d * d);
  }
  return std::pow(5.0 / 3.0, g.level) * acc.value();
}

double graph_energy(const VertexFunction& u) { return graph_energy(build_level_graph(u.level), u.values); }

}  // namespace fractal_spectra
