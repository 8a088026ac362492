#include "fractal_spectra/lattice_trace.hpp"

#include <algorithm>
#include <string>

#include "fractal_spectra/sg_graph.hpp"

namespace fractal_spectra {

LatticeGraph blowup_graph(int n) {
  if (n < 0 || n > kMaxBlowupLevel) {
    throw Error(ErrorKind::LevelTooLarge,
                "blow-up level must lie in [0, " + std::to_string(kMaxBlowupLevel) + "], got " + std::to_string(n));
  }
  const SGLevelGraph g = build_level_graph(n);
  LatticeGraph out;
  out.level = n;
  const double scale = std::ldexp(1.0, n);
  for (const auto& v : g.vertices) out.vertices.push_back(scale * v);
  out.edges = g.edges;
  out.masses.assign(out.vertices.size(), 2.0);
  for (int b : out.boundary) out.masses[static_cast<std::size_t>(b)] = 1.0;
  return out;
}

Eigen::Matrix3cd SymGForm::matrix() const {
  return u1 * Eigen::Matrix3cd::Identity() + ((u0 - u1) / 3.0) * Eigen::Matrix3cd::Ones();
}

Eigen::MatrixXcd assemble_Q1(const SymGForm& q) {
  const Eigen::Matrix3cd block = q.matrix();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(6, 6);
  for (const auto& tri : kQ1Triangles) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m(tri[i], tri[j]) += block(i, j);
    }
  }
  return m;
}

TraceResult schur_trace(const Eigen::MatrixXcd& m, const std::vector<int>& boundary) {
  const auto n = static_cast<int>(m.rows());
  if (m.cols() != n) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  std::vector<bool> on_boundary(static_cast<std::size_t>(n), false);
  for (int b : boundary) {
    if (b < 0 || b >= n || on_boundary[static_cast<std::size_t>(b)]) {
      throw Error(ErrorKind::InvalidArgument, "boundary indices must be distinct and in range");
    }
    on_boundary[static_cast<std::size_t>(b)] = true;
  }
  std::vector<int> interior;
  for (int i = 0; i < n; ++i) {
    if (!on_boundary[static_cast<std::size_t>(i)]) interior.push_back(i);
  }
  const auto nb = static_cast<Eigen::Index>(boundary.size());
  const auto ni = static_cast<Eigen::Index>(interior.size());
  Eigen::MatrixXcd bb(nb, nb), bi(nb, ni), ib(ni, nb), ii(ni, ni);
  for (Eigen::Index r = 0; r < nb; ++r) {
    for (Eigen::Index c = 0; c < nb; ++c) bb(r, c) = m(boundary[r], boundary[c]);
    for (Eigen::Index c = 0; c < ni; ++c) bi(r, c) = m(boundary[r], interior[c]);
  }
  for (Eigen::Index r = 0; r < ni; ++r) {
    for (Eigen::Index c = 0; c < nb; ++c) ib(r, c) = m(interior[r], boundary[c]);
    for (Eigen::Index c = 0; c < ni; ++c) ii(r, c) = m(interior[r], interior[c]);
  }

  TraceResult out;
  out.interior_determinant = 1.0;
  if (ni == 0) {
    out.schur = bb;
  } else {
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(ii);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw Error(ErrorKind::SingularInterior, "interior block is singular");
    out.interior_determinant = lu.determinant();
    out.schur = bb - bi * lu.solve(ib);
  }

  if (nb == 3) {
    const Eigen::MatrixXcd& s = out.schur;
    std::array<int, 3> perm{0, 1, 2};
    do {
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          out.invariance_residual = std::max(out.invariance_residual, std::abs(s(perm[r], perm[c]) - s(r, c)));
        }
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.invariant = out.invariance_residual <= kInvarianceTol * std::max(1.0, s.cwiseAbs().maxCoeff());
    const cplx diag = s.diagonal().mean();
    const cplx off = (s.sum() - s.diagonal().sum()) / 6.0;
    out.u1 = diag - off;
    out.u0 = diag + 2.0 * off;
  }
  return out;
}

std::pair<cplx, cplx> trace_map_closed_form(cplx u0, cplx u1) {
  const cplx first = 2.0 * u0 + u1;
  const cplx second = 5.0 * u1 + u0;
  if (first == 0.0 || second == 0.0) {
    throw Error(ErrorKind::ProjectiveInfinity, "closed-form trace map leaves the affine chart");
  }
  return {3.0 * u0 * u1 / first, u1 * (u0 + u1) / second};
}

ProjPoint1 g_map(const ProjPoint1& p) {
  const ProjPoint1 q = proj_normalize(p);
  const cplx z0 = q[0], z1 = q[1];
  ProjPoint1::Coords image;
  image << z0 * (5.0 * z1 + z0), (2.0 * z0 + z1) * (z0 + z1);
  if (image.cwiseAbs().maxCoeff() <= 1e-14) {
    throw Error(ErrorKind::IndeterminacyPoint, "g is undefined at this point");
  }
  return proj_normalize(ProjPoint1(image));
}

namespace {

constexpr double kPoleTol = 1e-12;

cplx guarded_div(cplx num, cplx den, const char* where) {
  if (std::abs(den) <= kPoleTol) throw Error(ErrorKind::PoleEncountered, std::string("pole of ") + where);
  return num / den;
}

cplx m_map(cplx z) { return guarded_div(3.0 * z, 1.0 - z, "M"); }
cplx g_affine(cplx z) { return guarded_div(z * (5.0 + z), (2.0 * z + 1.0) * (z + 1.0), "g"); }
cplx big_g(cplx v) { return guarded_div(3.0 * v * (2.0 * v + 5.0), (3.0 * v + 3.0) * (2.0 * v + 3.0), "G"); }
cplx p_poly(cplx v) { return v * (2.0 * v + 5.0); }

}  // namespace

double affine_conjugacy_residual(cplx z) { return std::abs(p_poly(-2.0 * z) + 2.0 * z * (5.0 - 4.0 * z)); }

ConjugacyResiduals conjugacy_checks(cplx z) {
  const cplx mz = m_map(z);
  const cplx gz = g_affine(z);
  const cplx mgz = m_map(gz);
  const cplx gmz = big_g(mz);
  ConjugacyResiduals r;
  r.literal = std::abs(mgz - gmz);
  r.substitution = std::abs(gz - gmz);
  r.conjugacy = std::abs(mgz - p_poly(mz));
  r.affine = affine_conjugacy_residual(z);
  return r;
}

}  // namespace fractal_spectra
