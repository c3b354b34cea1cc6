#pragma once

#include <optional>
#include <vector>

#include "ibap/ibap.hpp"

namespace ibap {

/// The constraint P_U x = u, i.e. the affine set u + U⊥.
template <FieldScalar Scalar>
class AffineConstraint {
 public:
  AffineConstraint(Subspace<Scalar> U, Vector<Scalar> u);

  const Subspace<Scalar>& subspace() const noexcept { return U_; }
  const Vector<Scalar>& target() const noexcept { return u_; }

 private:
  Subspace<Scalar> U_;
  Vector<Scalar> u_;
};

/// Particular solution plus the parallel subspace ⋂ U_i⊥.
template <FieldScalar Scalar>
struct SolutionSet {
  Vector<Scalar> particular;
  Subspace<Scalar> parallel;
};

struct SolveOptions {
  std::size_t max_iter = 10000;
  double tol = 1e-10;
  bool record_trace = false;

  void validate() const;
};

struct TraceRow {
  std::size_t index = 0;
  double max_residual = 0.0;
  std::optional<double> dist_to_solution;
  std::optional<double> bound;  // alpha^n * d_0, present when the IBAP holds
};

struct ConvergenceTrace {
  std::vector<TraceRow> iterations;
  bool converged = false;
  std::optional<double> alpha;
  std::optional<double> initial_distance;
};

/// Q x = u + x - P_U x.
template <FieldScalar Scalar>
Vector<Scalar> affine_project(const AffineConstraint<Scalar>& c, const Vector<Scalar>& x);

/// (Id - P_i P_{i+})^{-1}(u_i - P_i v) + (Id - P_{i+} P_i)^{-1}(v - P_{i+} u_i),
/// for u_i ∈ U_i and v ∈ U_{i+}. The result is the minimal-norm element of
/// (u_i + U_i⊥) ∩ (v + U_{i+}⊥). Requires ||P_i P_{i+}|| < 1.
template <FieldScalar Scalar>
Vector<Scalar> apply_Ti(const Subspace<Scalar>& U_i, const Subspace<Scalar>& U_iplus,
                        const Vector<Scalar>& u_i, const Vector<Scalar>& v);

/// Minimal-norm solution of P_1 z = u_1, P_2 z = u_2 for ||P_1 P_2|| < 1.
template <FieldScalar Scalar>
Vector<Scalar> solve_two(const AffineConstraint<Scalar>& c1, const AffineConstraint<Scalar>& c2);

/// The minimal-norm solution built backwards from x_m = u_m by x_i = T_i x_{i+1}.
/// Entry i of the returned list is x_{i+1} (zero-based), the minimal-norm
/// point of ⋂_{j >= i} (u_j + U_j⊥); entry 0 is the answer.
template <FieldScalar Scalar>
std::vector<Vector<Scalar>> min_norm_recursion(const Family<Scalar>& F,
                                               const Prescription<Scalar>& u);

template <FieldScalar Scalar>
Vector<Scalar> solve_min_norm(const Family<Scalar>& F, const Prescription<Scalar>& u);

/// Periodic projections x_{n+1} = Q_1 ... Q_m x_n from x_0 = r.
template <FieldScalar Scalar>
std::pair<Vector<Scalar>, ConvergenceTrace> best_approximation(const Vector<Scalar>& r,
                                                               const Family<Scalar>& F,
                                                               const Prescription<Scalar>& u,
                                                               const SolveOptions& opts = {});

/// Stacked minimal-norm least squares. With an anchor r the particular
/// solution is P_S r instead of P_S 0.
template <FieldScalar Scalar>
SolutionSet<Scalar> direct_solve(const Family<Scalar>& F, const Prescription<Scalar>& u,
                                 const std::optional<Vector<Scalar>>& anchor = std::nullopt);

/// sqrt(1 - prod_i (1 - c(U_i⊥, U_{i+}⊥)^2)).
template <FieldScalar Scalar>
double rate_bound(const Family<Scalar>& F);

}  // namespace ibap
