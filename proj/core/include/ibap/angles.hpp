#pragma once

#include "ibap/subspace.hpp"

namespace ibap {

/// Norms within this distance of 1 are treated as numerically degenerate.
inline constexpr double kDegeneracyBand = 1e-12;

/// ||P_U P_V||, the largest singular value of U.basis^H V.basis, clamped to [0, 1].
template <FieldScalar Scalar>
double op_norm_pupv(const Subspace<Scalar>& U, const Subspace<Scalar>& V);

/// Cosine of the Friedrichs angle between U and V.
///
/// With W = U ∩ V this is ||P_{U ∩ W⊥} P_{V ∩ W⊥}||, the supremum of |<x, y>| over
/// unit x in U ∩ W⊥ and unit y in V ∩ W⊥ (zero when either set is trivial).
template <FieldScalar Scalar>
double cos_friedrichs(const Subspace<Scalar>& U, const Subspace<Scalar>& V);

/// |c(U,V) - ||P_U P_V - P_{U∩V}|||, evaluated with dense projector matrices.
template <FieldScalar Scalar>
double verify_angle_identity(const Subspace<Scalar>& U, const Subspace<Scalar>& V);

inline bool is_degenerate(double norm, double band = kDegeneracyBand) {
  return norm >= 1.0 - band;
}

}  // namespace ibap
