#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "mvtest/errors.hpp"

namespace mvtest {

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<double>;
using Vector = DenseVector<double>;
using Index = Eigen::Index;

namespace detail {

template <class Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* who) {
  if (a.rows() != a.cols())
    throw DimensionMismatch(std::string(who) + ": matrix is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", expected square");
}

// Relative symmetry test: max|A - A'| <= tol * max|A|. A zero matrix passes.
template <class Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar rel_tol,
                       const char* who) {
  using Scalar = typename Derived::Scalar;
  const Scalar scale = a.cwiseAbs().maxCoeff();
  const Scalar skew = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (skew > rel_tol * scale)
    throw DomainError(std::string(who) + ": matrix is not symmetric (max skew " +
                      std::to_string(static_cast<double>(skew)) + ")");
}

}  // namespace detail

// Lower-triangular factor L with A = L L'.
template <class Scalar>
struct CholeskyFactorT {
  DenseMatrix<Scalar> lower;

  Index dim() const { return lower.rows(); }
  DenseMatrix<Scalar> reconstruct() const { return lower * lower.transpose(); }
};

using CholeskyFactor = CholeskyFactorT<double>;

// Unblocked Cholesky. A pivot at or below dim * eps * max(diag(A)) means the
// matrix is not usefully positive definite and raises NotPositiveDefinite.
template <class Derived>
CholeskyFactorT<typename Derived::Scalar> cholesky(const Eigen::MatrixBase<Derived>& a_in) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(a_in, "cholesky");
  detail::require_symmetric(a_in, Scalar(1e-12), "cholesky");

  const DenseMatrix<Scalar> a = a_in;
  const Index n = a.rows();
  const Scalar pivot_floor =
      Scalar(n) * std::numeric_limits<Scalar>::epsilon() * (n > 0 ? a.diagonal().maxCoeff() : Scalar(0));

  DenseMatrix<Scalar> l = DenseMatrix<Scalar>::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const Scalar pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (pivot <= pivot_floor)
      throw NotPositiveDefinite("cholesky: pivot " + std::to_string(static_cast<double>(pivot)) +
                                " at column " + std::to_string(j) + " is at or below the floor " +
                                std::to_string(static_cast<double>(pivot_floor)));
    l(j, j) = std::sqrt(pivot);
    for (Index i = j + 1; i < n; ++i)
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
  }
  return {std::move(l)};
}

enum class Side { Left, Right };

// Solve op(L) X = B (Side::Left) or X op(L) = B (Side::Right) where
// op(L) = L or L' depending on transpose. Back/forward substitution only.
template <class Scalar, class Derived>
DenseMatrix<Scalar> tri_solve(const CholeskyFactorT<Scalar>& l, const Eigen::MatrixBase<Derived>& b,
                              Side side, bool transpose) {
  const Index expected = side == Side::Left ? b.rows() : b.cols();
  if (l.dim() != expected)
    throw DimensionMismatch("tri_solve: factor dim " + std::to_string(l.dim()) +
                            " does not match operand " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  const auto tv = l.lower.template triangularView<Eigen::Lower>();
  DenseMatrix<Scalar> x = b;
  if (side == Side::Left) {
    if (transpose)
      tv.transpose().solveInPlace(x);
    else
      tv.solveInPlace(x);
  } else {
    if (transpose)
      tv.transpose().template solveInPlace<Eigen::OnTheRight>(x);
    else
      tv.template solveInPlace<Eigen::OnTheRight>(x);
  }
  return x;
}

// Eigenvalues of a symmetric matrix, descending, via cyclic Jacobi sweeps.
// Terminates when the off-diagonal Frobenius mass is <= 1e-12 * ||A||_F;
// 50 sweeps without that is NoConvergence (never seen for sane inputs).
template <class Derived>
DenseVector<typename Derived::Scalar> sym_eigenvalues(const Eigen::MatrixBase<Derived>& a_in) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(a_in, "sym_eigenvalues");
  detail::require_symmetric(a_in, Scalar(1e-10), "sym_eigenvalues");

  DenseMatrix<Scalar> a = ((a_in + a_in.transpose()) / Scalar(2));
  const Index n = a.rows();
  const Scalar off_tol = Scalar(1e-12) * a.norm();

  auto off_norm = [&a, n]() {
    Scalar s = 0;
    for (Index p = 0; p + 1 < n; ++p) s += a.col(p).tail(n - p - 1).squaredNorm();
    return std::sqrt(Scalar(2) * s);
  };

  constexpr int kMaxSweeps = 50;
  int sweeps = 0;
  while (off_norm() > off_tol) {
    if (++sweeps > kMaxSweeps)
      throw NoConvergence("sym_eigenvalues: Jacobi sweeps did not reach tolerance");
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
      }
    }
  }

  DenseVector<Scalar> vals = a.diagonal();
  std::sort(vals.begin(), vals.end(), std::greater<Scalar>());
  return vals;
}

// Eigenvalues of E^{-1} H for symmetric positive definite E and symmetric H,
// descending. Computed through the Cholesky congruence L^{-1} H L^{-'} (same
// spectrum, symmetric operand), so no unsymmetric eigenproblem is formed.
// Negative roundoff dust is clamped to zero: the pencil is PSD whenever H is.
template <class DerivedE, class DerivedH>
DenseVector<typename DerivedE::Scalar> eig_product(const Eigen::MatrixBase<DerivedE>& e,
                                                   const Eigen::MatrixBase<DerivedH>& h) {
  using Scalar = typename DerivedE::Scalar;
  detail::require_square(e, "eig_product");
  detail::require_square(h, "eig_product");
  if (e.rows() != h.rows())
    throw DimensionMismatch("eig_product: E is " + std::to_string(e.rows()) + "x" +
                            std::to_string(e.cols()) + " but H is " + std::to_string(h.rows()) +
                            "x" + std::to_string(h.cols()));
  detail::require_symmetric(h, Scalar(1e-10), "eig_product");

  const CholeskyFactorT<Scalar> l = cholesky(e);
  DenseMatrix<Scalar> m = tri_solve(l, h, Side::Left, false);   // L^{-1} H
  m = tri_solve(l, m, Side::Right, true);                       // ... L^{-'}
  m = ((m + m.transpose()) / Scalar(2)).eval();

  DenseVector<Scalar> vals = sym_eigenvalues(m);
  return vals.cwiseMax(Scalar(0));
}

}  // namespace mvtest
