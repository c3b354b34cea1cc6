#include "ibap/solver.hpp"

#include <cmath>
#include <string>

#include "ibap/linalg.hpp"

namespace ibap {

namespace {

template <FieldScalar Scalar>
void require_member(const Subspace<Scalar>& U, const Vector<Scalar>& u, std::size_t index) {
  const double dist = U.distance(u);
  if (dist > membership_tol(u.norm())) throw MembershipError(index, dist);
}

// T_i without the hypothesis checks. With ū = B a and v̄ = C b the two
// inverses of the closed form are the Schur complements of the Gram system
//   [ I    G ] [a]   [B^H u]
//   [ G^H  I ] [b] = [C^H v],   G = B^H C,
// which is solved as a whole for a small residual when ||G|| is close to 1.
template <FieldScalar Scalar>
Vector<Scalar> apply_T(const Subspace<Scalar>& U, const Subspace<Scalar>& V,
                       const Vector<Scalar>& u, const Vector<Scalar>& v) {
  if (U.is_zero()) return v;
  if (V.is_zero()) return u;
  const auto& B = U.basis();
  const auto& C = V.basis();
  const Eigen::Index k = B.cols();
  const Eigen::Index l = C.cols();
  Matrix<Scalar> gram = Matrix<Scalar>::Identity(k + l, k + l);
  gram.topRightCorner(k, l) = B.adjoint() * C;
  gram.bottomLeftCorner(l, k) = gram.topRightCorner(k, l).adjoint();
  Vector<Scalar> rhs(k + l);
  rhs << B.adjoint() * u, C.adjoint() * v;
  const Vector<Scalar> ab = gram.ldlt().solve(rhs);
  return B * ab.head(k) + C * ab.tail(l);
}

template <FieldScalar Scalar>
void require_two_subspace_ibap(const Subspace<Scalar>& U, const Subspace<Scalar>& V) {
  IbapReport report = verify_ibap(Family<Scalar>({U, V}));
  if (!report.verdict) {
    throw IbapFailure("two-subspace IBAP hypothesis violated: ||P_U P_V|| >= 1", std::move(report));
  }
}

}  // namespace

template <FieldScalar Scalar>
AffineConstraint<Scalar>::AffineConstraint(Subspace<Scalar> U, Vector<Scalar> u)
    : U_(std::move(U)), u_(std::move(u)) {
  detail::require_dim(U_, u_, "affine constraint");
  require_member(U_, u_, 0);
}

void SolveOptions::validate() const {
  if (max_iter < 1) throw Error("solve options: max_iter must be at least 1");
  if (!(tol > 0.0)) throw Error("solve options: tol must be positive");
}

template <FieldScalar Scalar>
Vector<Scalar> affine_project(const AffineConstraint<Scalar>& c, const Vector<Scalar>& x) {
  return c.target() + x - c.subspace().project(x);
}

template <FieldScalar Scalar>
Vector<Scalar> apply_Ti(const Subspace<Scalar>& U_i, const Subspace<Scalar>& U_iplus,
                        const Vector<Scalar>& u_i, const Vector<Scalar>& v) {
  detail::require_same_dim(U_i, U_iplus, "apply_Ti");
  detail::require_dim(U_i, u_i, "apply_Ti");
  detail::require_dim(U_i, v, "apply_Ti");
  require_member(U_i, u_i, 0);
  require_member(U_iplus, v, 1);
  require_two_subspace_ibap(U_i, U_iplus);
  return apply_T(U_i, U_iplus, u_i, v);
}

template <FieldScalar Scalar>
Vector<Scalar> solve_two(const AffineConstraint<Scalar>& c1, const AffineConstraint<Scalar>& c2) {
  detail::require_same_dim(c1.subspace(), c2.subspace(), "solve_two");
  require_two_subspace_ibap(c1.subspace(), c2.subspace());
  return apply_T(c1.subspace(), c2.subspace(), c1.target(), c2.target());
}

template <FieldScalar Scalar>
std::vector<Vector<Scalar>> min_norm_recursion(const Family<Scalar>& F,
                                               const Prescription<Scalar>& u) {
  check_prescription(F, u);
  IbapReport report = verify_ibap(F);
  if (!report.verdict) {
    throw IbapFailure("minimal-norm recursion requires the IBAP", std::move(report));
  }
  const std::size_t m = F.size();
  const auto trailing = trailing_sums(F);
  std::vector<Vector<Scalar>> xs(m);
  xs[m - 1] = u[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) xs[i] = apply_T(F[i], trailing[i], u[i], xs[i + 1]);
  return xs;
}

template <FieldScalar Scalar>
Vector<Scalar> solve_min_norm(const Family<Scalar>& F, const Prescription<Scalar>& u) {
  return min_norm_recursion(F, u).front();
}

template <FieldScalar Scalar>
SolutionSet<Scalar> direct_solve(const Family<Scalar>& F, const Prescription<Scalar>& u,
                                 const std::optional<Vector<Scalar>>& anchor) {
  check_prescription(F, u);
  if (anchor) detail::require_dim(F[0], *anchor, "direct_solve anchor");
  if (auto cert = infeasibility_certificate(F, u)) {
    throw Infeasible("prescription is infeasible: least-squares residual " +
                         std::to_string(cert->max_residual),
                     *cert);
  }
  const auto [A, b] = stacked_system(F, u);
  Vector<Scalar> x = linalg::min_norm_lstsq(A, b);

  Subspace<Scalar> parallel =
      complement(sum(std::span<const Subspace<Scalar>>(F.subspaces()), F.ambient_dim()));
  if (anchor) x += parallel.project(*anchor - x);
  return {std::move(x), std::move(parallel)};
}

template <FieldScalar Scalar>
std::pair<Vector<Scalar>, ConvergenceTrace> best_approximation(const Vector<Scalar>& r,
                                                               const Family<Scalar>& F,
                                                               const Prescription<Scalar>& u,
                                                               const SolveOptions& opts) {
  opts.validate();
  detail::require_dim(F[0], r, "best_approximation");
  if (auto cert = infeasibility_certificate(F, u)) {
    throw Infeasible("prescription is infeasible: least-squares residual " +
                         std::to_string(cert->max_residual),
                     *cert);
  }

  ConvergenceTrace trace;
  const IbapReport report = verify_ibap(F);
  std::optional<Vector<Scalar>> reference;
  if (report.verdict || opts.record_trace) {
    reference = direct_solve(F, u, std::optional<Vector<Scalar>>(r)).particular;
    trace.initial_distance = (r - *reference).norm();
  }
  if (report.verdict) trace.alpha = report.alpha;

  Vector<Scalar> x = r;
  for (std::size_t n = 1; n <= opts.max_iter; ++n) {
    // Q_1 ... Q_m x: Q_m acts first.
    for (std::size_t i = F.size(); i-- > 0;) x += u[i] - F[i].project(x);

    TraceRow row;
    row.index = n;
    row.max_residual = max_residual(F, u, x);
    if (opts.record_trace) row.dist_to_solution = (x - *reference).norm();
    if (trace.alpha) {
      row.bound = std::pow(*trace.alpha, static_cast<double>(n)) * *trace.initial_distance;
    }
    trace.iterations.push_back(row);
    if (row.max_residual <= opts.tol) {
      trace.converged = true;
      break;
    }
  }
  return {std::move(x), std::move(trace)};
}

template <FieldScalar Scalar>
double rate_bound(const Family<Scalar>& F) {
  IbapReport report = verify_ibap(F);
  if (!report.verdict) throw IbapFailure("rate bound requires the IBAP", std::move(report));
  return report.alpha;
}

#define IBAP_INSTANTIATE_SOLVER(S)                                                             \
  template class AffineConstraint<S>;                                                          \
  template Vector<S> affine_project(const AffineConstraint<S>&, const Vector<S>&);             \
  template Vector<S> apply_Ti(const Subspace<S>&, const Subspace<S>&, const Vector<S>&,        \
                              const Vector<S>&);                                               \
  template Vector<S> solve_two(const AffineConstraint<S>&, const AffineConstraint<S>&);        \
  template std::vector<Vector<S>> min_norm_recursion(const Family<S>&, const Prescription<S>&); \
  template Vector<S> solve_min_norm(const Family<S>&, const Prescription<S>&);                 \
  template SolutionSet<S> direct_solve(const Family<S>&, const Prescription<S>&,               \
                                       const std::optional<Vector<S>>&);                       \
  template std::pair<Vector<S>, ConvergenceTrace> best_approximation(                          \
      const Vector<S>&, const Family<S>&, const Prescription<S>&, const SolveOptions&);        \
  template double rate_bound(const Family<S>&);

IBAP_INSTANTIATE_SOLVER(double)
IBAP_INSTANTIATE_SOLVER(std::complex<double>)

#undef IBAP_INSTANTIATE_SOLVER

}  // namespace ibap
