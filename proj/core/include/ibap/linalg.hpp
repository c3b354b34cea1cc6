#pragma once

#include "ibap/types.hpp"

namespace ibap::linalg {

// Largest singular value; 0 for empty matrices.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<M> svd{M(A)};
  return svd.singularValues()(0);
}

// Minimal-norm least-squares solution of A x = b.
template <FieldScalar Scalar>
Vector<Scalar> min_norm_lstsq(const Matrix<Scalar>& A, const Vector<Scalar>& b) {
  if (A.rows() == 0) return Vector<Scalar>::Zero(A.cols());
  Eigen::CompleteOrthogonalDecomposition<Matrix<Scalar>> cod(A);
  return cod.solve(b);
}

}  // namespace ibap::linalg
