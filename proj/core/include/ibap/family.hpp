#pragma once

#include <vector>

#include "ibap/subspace.hpp"

namespace ibap {

/// Ordered family (U_1, ..., U_m), m >= 1, in a common ambient space.
template <FieldScalar Scalar>
class Family {
 public:
  explicit Family(std::vector<Subspace<Scalar>> subspaces);

  std::size_t size() const noexcept { return subspaces_.size(); }
  Eigen::Index ambient_dim() const noexcept { return subspaces_.front().ambient_dim(); }
  const Subspace<Scalar>& operator[](std::size_t i) const { return subspaces_[i]; }
  const std::vector<Subspace<Scalar>>& subspaces() const noexcept { return subspaces_; }
  auto begin() const noexcept { return subspaces_.begin(); }
  auto end() const noexcept { return subspaces_.end(); }

  /// Sum of the members' dimensions.
  Eigen::Index sum_dims() const;

 private:
  std::vector<Subspace<Scalar>> subspaces_;
};

template <FieldScalar Scalar>
using Prescription = std::vector<Vector<Scalar>>;

/// Membership tolerance for u_i in U_i.
inline double membership_tol(double norm) { return 1e-8 * std::max(1.0, norm); }

/// Throws DimensionMismatch or MembershipError unless u_i ∈ U_i for every i.
template <FieldScalar Scalar>
void check_prescription(const Family<Scalar>& F, const Prescription<Scalar>& u);

/// U_{i+} = U_{i+1} + ... + U_m for i = 0, ..., m-2 (zero-based).
template <FieldScalar Scalar>
std::vector<Subspace<Scalar>> trailing_sums(const Family<Scalar>& F);

/// max_i ||P_i x - u_i||.
template <FieldScalar Scalar>
double max_residual(const Family<Scalar>& F, const Prescription<Scalar>& u,
                    const Vector<Scalar>& x);

/// Stacked system basis_i^H x = basis_i^H u_i over all i, written as A x = b.
template <FieldScalar Scalar>
std::pair<Matrix<Scalar>, Vector<Scalar>> stacked_system(const Family<Scalar>& F,
                                                         const Prescription<Scalar>& u);

}  // namespace ibap
