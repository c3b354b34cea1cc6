#pragma once

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "ibap/angles.hpp"
#include "ibap/family.hpp"

namespace ibap {

/// Norms at or above 1 - kConditioningBand mark a level as degenerate in reports.
inline constexpr double kConditioningBand = 1e-8;

struct IbapLevel {
  double norm_pipiplus = 0.0;  // ||P_i P_{i+}||
  double cos_angle = 0.0;      // c(U_i, U_{i+})
  double cos_complements = 0.0;  // c(U_i⊥, U_{i+}⊥), feeds the rate bound
  double gamma = 1.0;          // 1/sqrt(1 - norm^2), +inf when norm >= 1
  bool degenerate = false;
  Eigen::Index dim_i = 0;
  Eigen::Index dim_iplus = 0;
};

struct IbapReport {
  bool independent = true;
  std::vector<IbapLevel> levels;
  double alpha = 0.0;
  bool verdict = true;
  Eigen::Index sum_dims = 0;
  Eigen::Index dim_sum = 0;
  // Closedness of U_i + U_{i+}; always true in finite dimension.
  bool sums_closed = true;

  bool any_degenerate() const {
    for (const auto& l : levels)
      if (l.degenerate) return true;
    return false;
  }
};

/// Raised when an operation requires the IBAP and the family does not have it.
class IbapFailure : public Error {
 public:
  IbapFailure(const std::string& what, IbapReport report)
      : Error(what), report_(std::move(report)) {}
  const IbapReport& report() const noexcept { return report_; }

 private:
  IbapReport report_;
};

/// Raised when the subspaces are linearly dependent. Carries a nonzero tuple
/// (v_i), v_i ∈ U_i, with sum v_i = 0.
class NotIndependent : public Error {
 public:
  NotIndependent(const std::string& what, std::vector<Eigen::VectorXcd> tuple)
      : Error(what), tuple_(std::move(tuple)) {}
  const std::vector<Eigen::VectorXcd>& tuple() const noexcept { return tuple_; }

 private:
  std::vector<Eigen::VectorXcd> tuple_;
};

struct InfeasibilityCertificate {
  double max_residual = 0.0;      // max_i ||P_i x - u_i|| at the least-squares point
  double stacked_residual = 0.0;  // sqrt(sum_i ||P_i x - u_i||^2)
  double tolerance = 0.0;
  // sum u_i = 0 with nonzero terms; then every x has
  // sum_i ||P_i x - u_i||^2 >= sum_i ||u_i||^2 =: lower_bound^2.
  bool sum_zero_witness = false;
  double lower_bound = 0.0;
};

class Infeasible : public Error {
 public:
  Infeasible(const std::string& what, InfeasibilityCertificate cert)
      : Error(what), cert_(cert) {}
  const InfeasibilityCertificate& certificate() const noexcept { return cert_; }

 private:
  InfeasibilityCertificate cert_;
};

/// Tolerance below which a least-squares residual counts as consistent.
inline double feasibility_tol(double scale) { return 1e-8 * (1.0 + scale); }

template <FieldScalar Scalar>
bool check_independence(const Family<Scalar>& F);

/// A nonzero tuple (v_i) with v_i ∈ U_i and sum v_i = 0, or nullopt if independent.
template <FieldScalar Scalar>
std::optional<std::vector<Vector<Scalar>>> dependent_tuple(const Family<Scalar>& F);

template <FieldScalar Scalar>
IbapReport verify_ibap(const Family<Scalar>& F);

/// Some x with max_i ||P_i x - u_i|| <= epsilon.
template <FieldScalar Scalar>
Vector<Scalar> epsilon_solve(const Family<Scalar>& F, const Prescription<Scalar>& u,
                             double epsilon);

template <FieldScalar Scalar>
std::optional<InfeasibilityCertificate> infeasibility_certificate(const Family<Scalar>& F,
                                                                  const Prescription<Scalar>& u);

/// True iff P_i x = u_i has at most one solution, i.e. ⋂ U_i⊥ = {0}.
template <FieldScalar Scalar>
bool uniqueness_check(const Family<Scalar>& F);

// ---------------------------------------------------------------------------
// Three orthonormal sequences (u_{i,k})_k, i = 1, 2, 3, with u_{i,k} ⟂ u_{j,l}
// for k != l. The spans satisfy
//   sup_k |<u_{i,k}, u_{j,k}>|^2 <= ||P_i P_j|| <= sup_k |<u_{i,k}, u_{j,k}>|
// and, when the square roots of the three sups sum to less than 1, the IBAP.
// ---------------------------------------------------------------------------

struct BiorthogonalPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double sup_inner = 0.0;
  double norm = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool lower_holds = false;
  bool upper_holds = false;
};

struct BiorthogonalReport {
  std::array<BiorthogonalPair, 3> pairs;  // (1,2), (2,3), (1,3)
  double sqrt_sum = 0.0;
  bool sufficient_condition = false;  // sqrt_sum < 1
  std::optional<bool> ibap_verdict;   // evaluated when sufficient_condition
  bool sandwich_holds() const {
    for (const auto& p : pairs)
      if (!p.lower_holds || !p.upper_holds) return false;
    return true;
  }
};

template <FieldScalar Scalar>
using BiorthogonalSequences = std::array<std::vector<Vector<Scalar>>, 3>;

template <FieldScalar Scalar>
BiorthogonalReport biorthogonal_bounds(const BiorthogonalSequences<Scalar>& seqs,
                                       double tol = 1e-10);

}  // namespace ibap
