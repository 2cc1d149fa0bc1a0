#pragma once

// Symplectic linear algebra for two-mode Wigner covariance matrices.
//
// Quadrature ordering is (Re a1, Im a1, Re a2, Im a2) and the vacuum
// covariance is I/4, so every symplectic eigenvalue of a physical state is
// at least 1/4.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "qisc/errors.hpp"

namespace qisc {

template <typename Scalar>
using Mat4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Vec4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

/// Two-mode zero-mean Gaussian state covariance (vacuum = I/4).
template <typename Scalar>
using CovMat4 = Mat4<Scalar>;

using CovMat4d = CovMat4<double>;

template <typename Scalar>
constexpr Scalar vacuum_variance() {
  return Scalar(1) / Scalar(4);
}

/// Symplectic form: block diagonal of [[0, 1], [-1, 0]].
template <typename Scalar = double>
Mat4<Scalar> symplectic_form() {
  Mat4<Scalar> omega = Mat4<Scalar>::Zero();
  omega(0, 1) = 1;
  omega(1, 0) = -1;
  omega(2, 3) = 1;
  omega(3, 2) = -1;
  return omega;
}

/// Symplectic matrix S and spectrum nu with cov = S diag(nu0,nu0,nu1,nu1) S^T.
template <typename Scalar>
struct WilliamsonDecomp {
  Mat4<Scalar> S;
  Vec2<Scalar> nu;  // descending

  Mat4<Scalar> reconstruct() const {
    Vec4<Scalar> d;
    d << nu(0), nu(0), nu(1), nu(1);
    return S * d.asDiagonal() * S.transpose();
  }
};

template <typename Derived>
bool is_symplectic(const Eigen::MatrixBase<Derived>& m,
                   typename Derived::Scalar tol = 1e-9) {
  using Scalar = typename Derived::Scalar;
  const Mat4<Scalar> omega = symplectic_form<Scalar>();
  return (m * omega * m.transpose() - omega).cwiseAbs().maxCoeff() <= tol;
}

/// Symplectic spectrum, descending. With cov = L L^T, the antisymmetric
/// M = L^T Omega L has -M^2 = M^T M with eigenvalues nu0^2, nu0^2, nu1^2,
/// nu1^2; a symmetric eigensolve keeps nearly equal pairs accurate.
template <typename Scalar>
Vec2<Scalar> symplectic_spectrum(const Mat4<Scalar>& cov) {
  using std::sqrt;
  Eigen::LLT<Mat4<Scalar>> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NonPhysicalCovariance("covariance is not positive definite");
  }
  const Mat4<Scalar> l = llt.matrixL();
  const Mat4<Scalar> m = l.transpose() * symplectic_form<Scalar>() * l;
  Mat4<Scalar> gram = m.transpose() * m;
  gram = (gram + gram.transpose()) / Scalar(2);
  const Vec4<Scalar> ev = Eigen::SelfAdjointEigenSolver<Mat4<Scalar>>(gram, Eigen::EigenvaluesOnly).eigenvalues();
  Vec2<Scalar> nu;
  nu(0) = sqrt((ev(2) + ev(3)) / Scalar(2));
  nu(1) = sqrt(std::max(Scalar(0), (ev(0) + ev(1)) / Scalar(2)));
  return nu;
}

namespace detail {

template <typename Scalar>
Scalar symmetry_defect(const Mat4<Scalar>& cov) {
  const Scalar scale = std::max(cov.cwiseAbs().maxCoeff(), Scalar(1e-300));
  return (cov - cov.transpose()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace detail

/// Slack used for the vacuum boundary; a pure state sits exactly on it.
constexpr double kPhysicalitySlack = 1e-9;

/// Throws NonPhysicalCovariance unless cov is symmetric, positive definite
/// and satisfies cov + (i/4) Omega >= 0.
template <typename Scalar>
void validate_covariance(const Mat4<Scalar>& cov) {
  if (!cov.allFinite()) {
    throw NonPhysicalCovariance("covariance has non-finite entries");
  }
  if (detail::symmetry_defect(cov) > Scalar(1e-12)) {
    throw NonPhysicalCovariance("covariance is not symmetric");
  }
  Eigen::LLT<Mat4<Scalar>> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NonPhysicalCovariance("covariance is not positive definite");
  }
  const Vec2<Scalar> nu = symplectic_spectrum(cov);
  if (nu(1) < vacuum_variance<Scalar>() - Scalar(kPhysicalitySlack)) {
    throw NonPhysicalCovariance(
        "covariance violates the uncertainty relation (smallest symplectic "
        "eigenvalue " + std::to_string(static_cast<double>(nu(1))) + ")");
  }
}

template <typename Scalar>
bool is_physical(const Mat4<Scalar>& cov) {
  try {
    validate_covariance(cov);
  } catch (const NonPhysicalCovariance&) {
    return false;
  }
  return true;
}

/// Puts a decomposition into canonical form: nu descending, and within each
/// column pair a rotation that makes the first non-negligible row of the
/// pair (c1[r], c2[r]) equal to (positive, 0). Both moves commute with the
/// symplectic form and with the diagonal, so the decomposition stays valid.
template <typename Scalar>
void canonicalize(WilliamsonDecomp<Scalar>& d) {
  using std::atan2;
  using std::cos;
  using std::sin;
  if (d.nu(1) > d.nu(0)) {
    std::swap(d.nu(0), d.nu(1));
    Eigen::Matrix<Scalar, 4, 2> first = d.S.template leftCols<2>();
    d.S.template leftCols<2>() = d.S.template rightCols<2>();
    d.S.template rightCols<2>() = first;
  }
  for (int pair = 0; pair < 2; ++pair) {
    auto c1 = d.S.col(2 * pair);
    auto c2 = d.S.col(2 * pair + 1);
    const Vec4<Scalar> weight = c1.cwiseAbs2() + c2.cwiseAbs2();
    const Scalar cutoff = weight.maxCoeff() * Scalar(1e-8);
    int row = 0;
    while (row < 3 && weight(row) <= cutoff) ++row;
    const Scalar phi = atan2(c2(row), c1(row));
    const Scalar cp = cos(phi);
    const Scalar sp = sin(phi);
    const Vec4<Scalar> a = c1;
    const Vec4<Scalar> b = c2;
    c1 = cp * a + sp * b;
    c2 = -sp * a + cp * b;
    c2(row) = Scalar(0);
  }
}

/// Williamson decomposition of a physical two-mode covariance.
///
/// With K = cov^{-1/2} Omega cov^{-1/2} (antisymmetric), an orthonormal
/// basis O bringing K to blocks [[0, 1/nu], [-1/nu, 0]] gives
/// S = cov^{1/2} O diag(nu)^{-1/2}. The basis comes from the eigenvectors
/// of -K^2, whose eigenvalues are 1/nu^2, each twice.
template <typename Scalar>
WilliamsonDecomp<Scalar> williamson(const Mat4<Scalar>& cov) {
  using std::sqrt;
  validate_covariance(cov);
  const Mat4<Scalar> sym = (cov + cov.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Mat4<Scalar>> root_solver(sym);
  const Mat4<Scalar> root = root_solver.operatorSqrt();
  const Mat4<Scalar> inv_root = root_solver.operatorInverseSqrt();

  Mat4<Scalar> k = inv_root * symplectic_form<Scalar>() * inv_root;
  k = (k - k.transpose()) / Scalar(2);
  Mat4<Scalar> neg_sq = -(k * k);
  neg_sq = (neg_sq + neg_sq.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Mat4<Scalar>> pair_solver(neg_sq);
  if (pair_solver.info() != Eigen::Success) {
    throw NumericalInstability("williamson: eigensolver failed");
  }
  const Mat4<Scalar>& vecs = pair_solver.eigenvectors();

  Mat4<Scalar> basis;
  Vec2<Scalar> inv_nu;
  // Smallest eigenvalue of -K^2 belongs to the largest nu.
  Vec4<Scalar> u = vecs.col(0);
  for (int pair = 0; pair < 2; ++pair) {
    if (pair == 1) {
      // Pick the remaining eigenvector least contained in the first pair.
      Scalar best = Scalar(-1);
      for (int c = 1; c < 4; ++c) {
        Vec4<Scalar> r = vecs.col(c);
        r -= basis.col(0).dot(r) * basis.col(0);
        r -= basis.col(1).dot(r) * basis.col(1);
        if (r.norm() > best) {
          best = r.norm();
          u = r;
        }
      }
      u.normalize();
    }
    const Vec4<Scalar> ku = k * u;
    const Scalar a = ku.norm();
    if (!(a > Scalar(0))) {
      throw NumericalInstability("williamson: degenerate symplectic pair");
    }
    basis.col(2 * pair) = u;
    basis.col(2 * pair + 1) = -ku / a;
    inv_nu(pair) = a;
  }

  WilliamsonDecomp<Scalar> out;
  out.nu = inv_nu.cwiseInverse();
  Vec4<Scalar> scale;
  scale << sqrt(inv_nu(0)), sqrt(inv_nu(0)), sqrt(inv_nu(1)), sqrt(inv_nu(1));
  out.S = root * basis * scale.asDiagonal();
  canonicalize(out);
  if (out.nu(1) < vacuum_variance<Scalar>() - Scalar(kPhysicalitySlack)) {
    throw NonPhysicalCovariance("symplectic eigenvalue below vacuum");
  }
  return out;
}

}  // namespace qisc
