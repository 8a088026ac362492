#pragma once

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>
#include <type_traits>
#include <vector>

#include "fractal_spectra/errors.hpp"

namespace fractal_spectra {

using cplx = std::complex<double>;
using Mat2C = Eigen::Matrix2cd;

struct Tolerances {
  double eq_tol = 1e-9;    // projective equality
  double root_tol = 1e-12; // bisection bracket width (relative to max(1, |root|))
  double sum_tol = 1e-10;  // series truncation

  void validate() const {
    if (!(eq_tol > 0 && root_tol > 0 && sum_tol > 0)) {
      throw Error(ErrorKind::InvalidArgument, "tolerances must be strictly positive");
    }
  }
};

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// ---------------------------------------------------------------------------
// Projective points

/// A point of P^Dim(C) in homogeneous coordinates. Construction rejects the
/// zero vector and non-finite entries, so every instance is a valid point.
template <int Dim>
class ProjPoint {
 public:
  using Coords = Eigen::Matrix<cplx, Dim + 1, 1>;

  explicit ProjPoint(const Coords& coords) : coords_(coords) {
    bool nonzero = false;
    for (int i = 0; i <= Dim; ++i) {
      if (!is_finite(coords_[i])) {
        throw Error(ErrorKind::InvalidProjectivePoint, "non-finite coordinate");
      }
      nonzero = nonzero || std::abs(coords_[i]) > 0.0;
    }
    if (!nonzero) throw Error(ErrorKind::InvalidProjectivePoint, "all coordinates are zero");
  }

  template <typename... Ts>
    requires(sizeof...(Ts) == Dim + 1)
  static ProjPoint of(Ts... values) {
    Coords c;
    int i = 0;
    ((c[i++] = cplx(values)), ...);
    return ProjPoint(c);
  }

  const Coords& coords() const { return coords_; }
  cplx operator[](int i) const { return coords_[i]; }

  /// Index of the coordinate of largest modulus; ties go to the lowest index.
  int pivot() const {
    int best = 0;
    for (int i = 1; i <= Dim; ++i) {
      if (std::abs(coords_[i]) > std::abs(coords_[best])) best = i;
    }
    return best;
  }

 private:
  Coords coords_;
};

using ProjPoint1 = ProjPoint<1>;
using ProjPoint2 = ProjPoint<2>;

/// Representative whose largest-modulus coordinate equals 1.
template <int Dim>
ProjPoint<Dim> proj_normalize(const ProjPoint<Dim>& p) {
  const int k = p.pivot();
  typename ProjPoint<Dim>::Coords c = p.coords() / p[k];
  c[k] = cplx(1.0, 0.0);
  return ProjPoint<Dim>(c);
}

/// Sine of the Hermitian angle between the two lines: |p ^ q| / (|p| |q|).
template <int Dim>
double proj_distance(const ProjPoint<Dim>& p, const ProjPoint<Dim>& q) {
  // rescale first so the wedge products cannot overflow
  const auto a = (p.coords() / std::abs(p[p.pivot()])).eval();
  const auto b = (q.coords() / std::abs(q[q.pivot()])).eval();
  double wedge2 = 0.0;
  for (int i = 0; i <= Dim; ++i) {
    for (int j = i + 1; j <= Dim; ++j) {
      wedge2 += std::norm(a[i] * b[j] - a[j] * b[i]);
    }
  }
  const double d = std::sqrt(wedge2) / (a.norm() * b.norm());
  return std::clamp(d, 0.0, 1.0);
}

template <int Dim>
bool proj_equal(const ProjPoint<Dim>& p, const ProjPoint<Dim>& q, double tol = Tolerances{}.eq_tol) {
  return proj_distance(p, q) <= tol;
}

template <int Dim>
bool operator==(const ProjPoint<Dim>& p, const ProjPoint<Dim>& q) {
  return proj_equal(p, q);
}

// ---------------------------------------------------------------------------
// 2x2 matrices

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> translation_matrix(Scalar gap) {
  Eigen::Matrix<Scalar, 2, 2> m;
  m << Scalar(1), gap, Scalar(0), Scalar(1);
  return m;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> kick_matrix(Scalar strength) {
  Eigen::Matrix<Scalar, 2, 2> m;
  m << Scalar(1), Scalar(0), -strength, Scalar(1);
  return m;
}

/// diag(1, s)
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> dilation_matrix(Scalar s) {
  Eigen::Matrix<Scalar, 2, 2> m;
  m << Scalar(1), Scalar(0), Scalar(0), s;
  return m;
}

inline double max_abs_entry(const Mat2C& m) { return m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------
// Summation

namespace detail {
struct NeumaierReal {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};
}  // namespace detail

/// Neumaier compensated accumulator for double or cplx.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    if constexpr (std::is_same_v<T, cplx>) {
      re_.add(x.real());
      im_.add(x.imag());
    } else {
      re_.add(x);
    }
  }
  T value() const {
    if constexpr (std::is_same_v<T, cplx>) {
      return {re_.value(), im_.value()};
    } else {
      return re_.value();
    }
  }

 private:
  detail::NeumaierReal re_, im_;
};

// ---------------------------------------------------------------------------
// Root finding and quadrature

/// Bisection on a sign-changing bracket. Stops when the bracket width is at
/// most tol * max(1, |midpoint|) or cannot shrink further in binary64.
template <typename F>
double bisect_root(F&& f, double lo, double hi, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "bisection tolerance must be positive");
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo * fhi < 0.0)) {
    throw Error(ErrorKind::NoBracket, "f(lo) and f(hi) have the same sign");
  }
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol * std::max(1.0, std::abs(mid)) || mid == lo || mid == hi) return mid;
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// (1 / 2 pi i) times the contour integral of f over |z| = radius, by the
/// trapezoid rule on equispaced nodes.
template <typename F>
cplx contour_integral(F&& f, double radius, int nodes) {
  if (!(radius > 0)) throw Error(ErrorKind::InvalidArgument, "contour radius must be positive");
  if (nodes < 16) throw Error(ErrorKind::InvalidArgument, "contour integral needs at least 16 nodes");
  CompensatedSum<cplx> acc;
  for (int k = 0; k < nodes; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / nodes;
    const cplx z = std::polar(radius, theta);
    const cplx fz = f(z);
    if (!is_finite(fz)) {
      throw Error(ErrorKind::NumericOverflow, "non-finite integrand sample on the contour");
    }
    // dz = i z dtheta, and the i cancels against 1/(2 pi i)
    acc.add(fz * z);
  }
  return acc.value() / static_cast<double>(nodes);
}

// ---------------------------------------------------------------------------
// Dense symmetric eigensolver

template <typename Scalar>
struct SymmetricEigen {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;           // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns, empty if not requested
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is at most
/// off_tol (absolute).
template <typename Scalar>
SymmetricEigen<Scalar> jacobi_eigensolve(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& input,
                                         Scalar off_tol, bool compute_vectors, int max_sweeps = 100) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  Matrix a = 0.5 * (input + input.transpose());
  Matrix v;
  if (compute_vectors) v = Matrix::Identity(n, n);

  auto off_norm = [&] {
    Scalar s = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i != j) s += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(s);
  };

  SymmetricEigen<Scalar> out;
  for (; out.sweeps < max_sweeps && off_norm() > off_tol; ++out.sweeps) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        a(p, q) = a(q, p) = Scalar(0);
        if (compute_vectors) v.applyOnTheRight(p, q, rot);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  if (compute_vectors) out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    if (compute_vectors) out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace fractal_spectra
