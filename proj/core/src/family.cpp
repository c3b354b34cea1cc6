#include "ibap/family.hpp"

#include <string>

namespace ibap {

template <FieldScalar Scalar>
Family<Scalar>::Family(std::vector<Subspace<Scalar>> subspaces)
    : subspaces_(std::move(subspaces)) {
  if (subspaces_.empty()) throw Error("family: at least one subspace is required");
  const Eigen::Index n = subspaces_.front().ambient_dim();
  for (std::size_t i = 1; i < subspaces_.size(); ++i) {
    if (subspaces_[i].ambient_dim() != n) {
      throw DimensionMismatch("family: member " + std::to_string(i) + " has ambient dimension " +
                              std::to_string(subspaces_[i].ambient_dim()) + ", expected " +
                              std::to_string(n));
    }
  }
}

template <FieldScalar Scalar>
Eigen::Index Family<Scalar>::sum_dims() const {
  Eigen::Index total = 0;
  for (const auto& U : subspaces_) total += U.dim();
  return total;
}

template <FieldScalar Scalar>
void check_prescription(const Family<Scalar>& F, const Prescription<Scalar>& u) {
  if (u.size() != F.size()) {
    throw DimensionMismatch("prescription has " + std::to_string(u.size()) +
                            " vectors for a family of " + std::to_string(F.size()));
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    detail::require_dim(F[i], u[i], "prescription");
    const double dist = F[i].distance(u[i]);
    if (dist > membership_tol(u[i].norm())) throw MembershipError(i, dist);
  }
}

template <FieldScalar Scalar>
std::vector<Subspace<Scalar>> trailing_sums(const Family<Scalar>& F) {
  const std::size_t m = F.size();
  if (m < 2) return {};
  std::vector<Subspace<Scalar>> out(m - 1, Subspace<Scalar>(F.ambient_dim()));
  out[m - 2] = F[m - 1];
  for (std::size_t i = m - 2; i-- > 0;) out[i] = sum(F[i + 1], out[i + 1]);
  return out;
}

template <FieldScalar Scalar>
double max_residual(const Family<Scalar>& F, const Prescription<Scalar>& u,
                    const Vector<Scalar>& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    worst = std::max(worst, (F[i].project(x) - u[i]).norm());
  }
  return worst;
}

template <FieldScalar Scalar>
std::pair<Matrix<Scalar>, Vector<Scalar>> stacked_system(const Family<Scalar>& F,
                                                         const Prescription<Scalar>& u) {
  const Eigen::Index rows = F.sum_dims();
  Matrix<Scalar> A(rows, F.ambient_dim());
  Vector<Scalar> b(rows);
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const auto& B = F[i].basis();
    A.middleRows(row, B.cols()) = B.adjoint();
    b.segment(row, B.cols()) = B.adjoint() * u[i];
    row += B.cols();
  }
  return {std::move(A), std::move(b)};
}

#define IBAP_INSTANTIATE_FAMILY(S)                                                        \
  template class Family<S>;                                                               \
  template void check_prescription(const Family<S>&, const Prescription<S>&);             \
  template std::vector<Subspace<S>> trailing_sums(const Family<S>&);                      \
  template double max_residual(const Family<S>&, const Prescription<S>&, const Vector<S>&); \
  template std::pair<Matrix<S>, Vector<S>> stacked_system(const Family<S>&,               \
                                                          const Prescription<S>&);

IBAP_INSTANTIATE_FAMILY(double)
IBAP_INSTANTIATE_FAMILY(std::complex<double>)

#undef IBAP_INSTANTIATE_FAMILY

}  // namespace ibap
