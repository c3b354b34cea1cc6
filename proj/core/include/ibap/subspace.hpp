#pragma once

#include <span>
#include <vector>

#include "ibap/error.hpp"
#include "ibap/types.hpp"

namespace ibap {

//
// A subspace of R^n or C^n stored as an n x k matrix with orthonormal
// columns. k = 0 is the zero subspace. Values are immutable once built.
//
template <FieldScalar Scalar>
class Subspace {
 public:
  using vector_type = Vector<Scalar>;
  using matrix_type = Matrix<Scalar>;

  /// Zero subspace of R^n / C^n.
  explicit Subspace(Eigen::Index ambient_dim, double rank_tol = 0.0);

  /// Span of the given vectors. rank_tol = 0 selects the default
  /// max(n, #vectors) * machine epsilon, relative to the largest singular value.
  static Subspace from_spanning(std::span<const vector_type> vectors, Eigen::Index ambient_dim,
                                double rank_tol = 0.0);

  /// Column span of a matrix.
  static Subspace from_columns(const matrix_type& columns, double rank_tol = 0.0);

  /// Wrap a matrix whose columns are already orthonormal.
  static Subspace from_orthonormal(matrix_type basis, double rank_tol = 0.0);

  static Subspace full(Eigen::Index ambient_dim, double rank_tol = 0.0);

  Eigen::Index ambient_dim() const noexcept { return ambient_dim_; }
  Eigen::Index dim() const noexcept { return basis_.cols(); }
  bool is_zero() const noexcept { return basis_.cols() == 0; }
  const matrix_type& basis() const noexcept { return basis_; }
  double rank_tol() const noexcept { return rank_tol_; }

  vector_type project(const vector_type& x) const;

  /// Dense n x n projector matrix. Intended for small problems and tests.
  matrix_type projector() const;

  /// Distance from x to the subspace, ||x - P x||.
  double distance(const vector_type& x) const;

  bool contains(const vector_type& x, double tol) const;

 private:
  Subspace(Eigen::Index ambient_dim, matrix_type basis, double rank_tol);

  Eigen::Index ambient_dim_;
  matrix_type basis_;
  double rank_tol_;
};

template <FieldScalar Scalar>
Vector<Scalar> project(const Subspace<Scalar>& U, const Vector<Scalar>& x) {
  return U.project(x);
}

template <FieldScalar Scalar>
Subspace<Scalar> complement(const Subspace<Scalar>& U);

template <FieldScalar Scalar>
Subspace<Scalar> sum(const Subspace<Scalar>& U, const Subspace<Scalar>& V);

/// Sum of many subspaces, computed from one factorization of the stacked bases.
template <FieldScalar Scalar>
Subspace<Scalar> sum(std::span<const Subspace<Scalar>> subspaces, Eigen::Index ambient_dim);

/// U ∩ V, computed as (U⊥ + V⊥)⊥.
template <FieldScalar Scalar>
Subspace<Scalar> intersect(const Subspace<Scalar>& U, const Subspace<Scalar>& V);

/// sup over unit u in U of ||u - P_V u||; zero iff U ⊂ V.
template <FieldScalar Scalar>
double containment_error(const Subspace<Scalar>& U, const Subspace<Scalar>& V);

/// True if U and V span the same space to within tol.
template <FieldScalar Scalar>
bool same_span(const Subspace<Scalar>& U, const Subspace<Scalar>& V, double tol = 1e-10);

/// Default relative rank threshold for a spanning set of `count` vectors in dimension n.
double default_rank_tol(Eigen::Index ambient_dim, Eigen::Index count);

namespace detail {

template <FieldScalar Scalar>
void require_same_dim(const Subspace<Scalar>& U, const Subspace<Scalar>& V, const char* op);

template <FieldScalar Scalar>
void require_dim(const Subspace<Scalar>& U, const Vector<Scalar>& x, const char* op);

double combined_rank_tol(double a, double b);

}  // namespace detail

}  // namespace ibap
