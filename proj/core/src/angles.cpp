#include "ibap/angles.hpp"

#include <algorithm>
#include <cmath>

#include "ibap/linalg.hpp"

namespace ibap {

template <FieldScalar Scalar>
double op_norm_pupv(const Subspace<Scalar>& U, const Subspace<Scalar>& V) {
  detail::require_same_dim(U, V, "op_norm_pupv");
  if (U.is_zero() || V.is_zero()) return 0.0;
  const Matrix<Scalar> cross = U.basis().adjoint() * V.basis();
  return std::clamp(linalg::spectral_norm(cross), 0.0, 1.0);
}

template <FieldScalar Scalar>
double cos_friedrichs(const Subspace<Scalar>& U, const Subspace<Scalar>& V) {
  detail::require_same_dim(U, V, "cos_friedrichs");
  const Subspace<Scalar> W = intersect(U, V);
  if (W.is_zero()) return op_norm_pupv(U, V);
  const Subspace<Scalar> W_perp = complement(W);
  return op_norm_pupv(intersect(U, W_perp), intersect(V, W_perp));
}

template <FieldScalar Scalar>
double verify_angle_identity(const Subspace<Scalar>& U, const Subspace<Scalar>& V) {
  detail::require_same_dim(U, V, "verify_angle_identity");
  const Matrix<Scalar> lhs =
      U.projector() * V.projector() - intersect(U, V).projector();
  return std::abs(cos_friedrichs(U, V) - linalg::spectral_norm(lhs));
}

template double op_norm_pupv(const Subspace<double>&, const Subspace<double>&);
template double op_norm_pupv(const Subspace<std::complex<double>>&,
                             const Subspace<std::complex<double>>&);
template double cos_friedrichs(const Subspace<double>&, const Subspace<double>&);
template double cos_friedrichs(const Subspace<std::complex<double>>&,
                               const Subspace<std::complex<double>>&);
template double verify_angle_identity(const Subspace<double>&, const Subspace<double>&);
template double verify_angle_identity(const Subspace<std::complex<double>>&,
                                      const Subspace<std::complex<double>>&);

}  // namespace ibap
