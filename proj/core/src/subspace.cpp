#include "ibap/subspace.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ibap/linalg.hpp"

namespace ibap {

double default_rank_tol(Eigen::Index ambient_dim, Eigen::Index count) {
  return static_cast<double>(std::max(ambient_dim, count)) *
         std::numeric_limits<double>::epsilon();
}

namespace detail {

template <FieldScalar Scalar>
void require_same_dim(const Subspace<Scalar>& U, const Subspace<Scalar>& V, const char* op) {
  if (U.ambient_dim() != V.ambient_dim()) {
    throw DimensionMismatch(std::string(op) + ": ambient dimensions " +
                            std::to_string(U.ambient_dim()) + " and " +
                            std::to_string(V.ambient_dim()) + " differ");
  }
}

template <FieldScalar Scalar>
void require_dim(const Subspace<Scalar>& U, const Vector<Scalar>& x, const char* op) {
  if (x.size() != U.ambient_dim()) {
    throw DimensionMismatch(std::string(op) + ": vector of length " + std::to_string(x.size()) +
                            " in ambient dimension " + std::to_string(U.ambient_dim()));
  }
}

double combined_rank_tol(double a, double b) { return std::max(a, b); }

}  // namespace detail

template <FieldScalar Scalar>
Subspace<Scalar>::Subspace(Eigen::Index ambient_dim, double rank_tol)
    : Subspace(ambient_dim, matrix_type(ambient_dim, 0), rank_tol) {}

template <FieldScalar Scalar>
Subspace<Scalar>::Subspace(Eigen::Index ambient_dim, matrix_type basis, double rank_tol)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)), rank_tol_(rank_tol) {
  if (ambient_dim < 1) throw Error("subspace: ambient dimension must be positive");
  if (rank_tol < 0.0) throw Error("subspace: rank_tol must be nonnegative");
}

template <FieldScalar Scalar>
Subspace<Scalar> Subspace<Scalar>::from_spanning(std::span<const vector_type> vectors,
                                                 Eigen::Index ambient_dim, double rank_tol) {
  matrix_type columns(ambient_dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != ambient_dim) {
      throw DimensionMismatch("from_spanning: vector " + std::to_string(j) + " has length " +
                              std::to_string(vectors[j].size()) + ", expected " +
                              std::to_string(ambient_dim));
    }
    columns.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  if (ambient_dim < 1) throw Error("subspace: ambient dimension must be positive");
  return from_columns(columns, rank_tol);
}

template <FieldScalar Scalar>
Subspace<Scalar> Subspace<Scalar>::from_columns(const matrix_type& columns, double rank_tol) {
  const Eigen::Index n = columns.rows();
  if (columns.cols() == 0) return Subspace(n, rank_tol);

  const double tol = rank_tol > 0.0 ? rank_tol : default_rank_tol(n, columns.cols());
  Eigen::JacobiSVD<matrix_type> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    const double threshold = tol * sv(0);
    while (rank < sv.size() && sv(rank) > threshold) ++rank;
  }
  return Subspace(n, svd.matrixU().leftCols(rank), rank_tol);
}

template <FieldScalar Scalar>
Subspace<Scalar> Subspace<Scalar>::from_orthonormal(matrix_type basis, double rank_tol) {
  const Eigen::Index n = basis.rows();
  return Subspace(n, std::move(basis), rank_tol);
}

template <FieldScalar Scalar>
Subspace<Scalar> Subspace<Scalar>::full(Eigen::Index ambient_dim, double rank_tol) {
  return Subspace(ambient_dim, matrix_type::Identity(ambient_dim, ambient_dim), rank_tol);
}

template <FieldScalar Scalar>
auto Subspace<Scalar>::project(const vector_type& x) const -> vector_type {
  detail::require_dim(*this, x, "project");
  if (is_zero()) return vector_type::Zero(ambient_dim_);
  return basis_ * (basis_.adjoint() * x);
}

template <FieldScalar Scalar>
auto Subspace<Scalar>::projector() const -> matrix_type {
  return basis_ * basis_.adjoint();
}

template <FieldScalar Scalar>
double Subspace<Scalar>::distance(const vector_type& x) const {
  return (x - project(x)).norm();
}

template <FieldScalar Scalar>
bool Subspace<Scalar>::contains(const vector_type& x, double tol) const {
  return distance(x) <= tol;
}

template <FieldScalar Scalar>
Subspace<Scalar> complement(const Subspace<Scalar>& U) {
  using M = Matrix<Scalar>;
  const Eigen::Index n = U.ambient_dim();
  const Eigen::Index k = U.dim();
  if (k == 0) return Subspace<Scalar>::full(n, U.rank_tol());
  if (k == n) return Subspace<Scalar>(n, U.rank_tol());
  Eigen::HouseholderQR<M> qr(U.basis());
  M Q = qr.householderQ() * M::Identity(n, n);
  return Subspace<Scalar>::from_orthonormal(Q.rightCols(n - k), U.rank_tol());
}

template <FieldScalar Scalar>
Subspace<Scalar> sum(const Subspace<Scalar>& U, const Subspace<Scalar>& V) {
  detail::require_same_dim(U, V, "sum");
  const double tol = detail::combined_rank_tol(U.rank_tol(), V.rank_tol());
  if (V.is_zero()) return Subspace<Scalar>::from_orthonormal(U.basis(), tol);
  if (U.is_zero()) return Subspace<Scalar>::from_orthonormal(V.basis(), tol);
  Matrix<Scalar> stacked(U.ambient_dim(), U.dim() + V.dim());
  stacked << U.basis(), V.basis();
  return Subspace<Scalar>::from_columns(stacked, tol);
}

template <FieldScalar Scalar>
Subspace<Scalar> sum(std::span<const Subspace<Scalar>> subspaces, Eigen::Index ambient_dim) {
  Eigen::Index total = 0;
  double tol = 0.0;
  for (const auto& U : subspaces) {
    if (U.ambient_dim() != ambient_dim) {
      throw DimensionMismatch("sum: member of ambient dimension " +
                              std::to_string(U.ambient_dim()) + ", expected " +
                              std::to_string(ambient_dim));
    }
    total += U.dim();
    tol = detail::combined_rank_tol(tol, U.rank_tol());
  }
  Matrix<Scalar> stacked(ambient_dim, total);
  Eigen::Index col = 0;
  for (const auto& U : subspaces) {
    stacked.middleCols(col, U.dim()) = U.basis();
    col += U.dim();
  }
  return Subspace<Scalar>::from_columns(stacked, tol);
}

template <FieldScalar Scalar>
Subspace<Scalar> intersect(const Subspace<Scalar>& U, const Subspace<Scalar>& V) {
  detail::require_same_dim(U, V, "intersect");
  return complement(sum(complement(U), complement(V)));
}

template <FieldScalar Scalar>
double containment_error(const Subspace<Scalar>& U, const Subspace<Scalar>& V) {
  detail::require_same_dim(U, V, "containment_error");
  if (U.is_zero()) return 0.0;
  Matrix<Scalar> residual = U.basis();
  if (!V.is_zero()) residual -= V.basis() * (V.basis().adjoint() * U.basis());
  return linalg::spectral_norm(residual);
}

template <FieldScalar Scalar>
bool same_span(const Subspace<Scalar>& U, const Subspace<Scalar>& V, double tol) {
  return U.dim() == V.dim() && containment_error(U, V) <= tol && containment_error(V, U) <= tol;
}

#define IBAP_INSTANTIATE_SUBSPACE(S)                                                          \
  template class Subspace<S>;                                                                 \
  template Subspace<S> complement(const Subspace<S>&);                                        \
  template Subspace<S> sum(const Subspace<S>&, const Subspace<S>&);                           \
  template Subspace<S> sum(std::span<const Subspace<S>>, Eigen::Index);                       \
  template Subspace<S> intersect(const Subspace<S>&, const Subspace<S>&);                     \
  template double containment_error(const Subspace<S>&, const Subspace<S>&);                  \
  template bool same_span(const Subspace<S>&, const Subspace<S>&, double);                    \
  template void detail::require_same_dim(const Subspace<S>&, const Subspace<S>&, const char*); \
  template void detail::require_dim(const Subspace<S>&, const Vector<S>&, const char*);

IBAP_INSTANTIATE_SUBSPACE(double)
IBAP_INSTANTIATE_SUBSPACE(std::complex<double>)

#undef IBAP_INSTANTIATE_SUBSPACE

}  // namespace ibap
