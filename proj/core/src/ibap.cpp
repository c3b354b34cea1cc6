#include "ibap/ibap.hpp"

#include <cmath>
#include <string>

#include "ibap/linalg.hpp"

namespace ibap {

namespace {

template <FieldScalar Scalar>
Matrix<Scalar> stacked_bases(const Family<Scalar>& F) {
  Matrix<Scalar> M(F.ambient_dim(), F.sum_dims());
  Eigen::Index col = 0;
  for (const auto& U : F) {
    M.middleCols(col, U.dim()) = U.basis();
    col += U.dim();
  }
  return M;
}

template <FieldScalar Scalar>
std::vector<Eigen::VectorXcd> to_complex(const std::vector<Vector<Scalar>>& vs) {
  std::vector<Eigen::VectorXcd> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.emplace_back(v.template cast<std::complex<double>>());
  return out;
}

// sqrt(1 - prod_i (1 - c_i^2)) for the complement cosines of each level.
double rate_from_levels(const std::vector<IbapLevel>& levels) {
  double prod = 1.0;
  for (const auto& l : levels) prod *= 1.0 - l.cos_complements * l.cos_complements;
  return std::sqrt(std::clamp(1.0 - prod, 0.0, 1.0));
}

}  // namespace

template <FieldScalar Scalar>
bool check_independence(const Family<Scalar>& F) {
  return sum(std::span<const Subspace<Scalar>>(F.subspaces()), F.ambient_dim()).dim() ==
         F.sum_dims();
}

template <FieldScalar Scalar>
std::optional<std::vector<Vector<Scalar>>> dependent_tuple(const Family<Scalar>& F) {
  if (check_independence(F)) return std::nullopt;
  const Matrix<Scalar> M = stacked_bases(F);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(M, Eigen::ComputeFullV);
  const Vector<Scalar> coeffs = svd.matrixV().col(M.cols() - 1);
  std::vector<Vector<Scalar>> tuple;
  Eigen::Index row = 0;
  for (const auto& U : F) {
    tuple.emplace_back(U.basis() * coeffs.segment(row, U.dim()));
    row += U.dim();
  }
  return tuple;
}

template <FieldScalar Scalar>
IbapReport verify_ibap(const Family<Scalar>& F) {
  IbapReport report;
  report.sum_dims = F.sum_dims();
  report.dim_sum = sum(std::span<const Subspace<Scalar>>(F.subspaces()), F.ambient_dim()).dim();
  report.independent = report.dim_sum == report.sum_dims;

  const auto trailing = trailing_sums(F);
  bool norms_below_one = true;
  for (std::size_t i = 0; i + 1 < F.size(); ++i) {
    IbapLevel level;
    level.dim_i = F[i].dim();
    level.dim_iplus = trailing[i].dim();
    level.norm_pipiplus = op_norm_pupv(F[i], trailing[i]);
    level.cos_angle = cos_friedrichs(F[i], trailing[i]);
    level.cos_complements = cos_friedrichs(complement(F[i]), complement(trailing[i]));
    const double n2 = level.norm_pipiplus * level.norm_pipiplus;
    level.gamma = level.norm_pipiplus < 1.0 ? 1.0 / std::sqrt(1.0 - n2)
                                            : std::numeric_limits<double>::infinity();
    level.degenerate = is_degenerate(level.norm_pipiplus, kConditioningBand);
    norms_below_one = norms_below_one && level.norm_pipiplus < 1.0;
    report.levels.push_back(level);
  }
  report.verdict = report.independent && norms_below_one;
  report.alpha = report.verdict ? rate_from_levels(report.levels) : 1.0;
  return report;
}

template <FieldScalar Scalar>
Vector<Scalar> epsilon_solve(const Family<Scalar>& F, const Prescription<Scalar>& u,
                             double epsilon) {
  if (!(epsilon > 0.0)) throw Error("epsilon_solve: epsilon must be positive");
  check_prescription(F, u);
  if (auto tuple = dependent_tuple(F)) {
    throw NotIndependent("epsilon_solve: subspaces are linearly dependent", to_complex(*tuple));
  }
  const auto [A, b] = stacked_system(F, u);
  Vector<Scalar> x = linalg::min_norm_lstsq(A, b);
  const double res = max_residual(F, u, x);
  if (res > epsilon) {
    throw Error("epsilon_solve: residual " + std::to_string(res) + " exceeds epsilon " +
                std::to_string(epsilon));
  }
  return x;
}

template <FieldScalar Scalar>
std::optional<InfeasibilityCertificate> infeasibility_certificate(const Family<Scalar>& F,
                                                                  const Prescription<Scalar>& u) {
  check_prescription(F, u);
  double scale = 0.0;
  double sum_sq = 0.0;
  Vector<Scalar> total = Vector<Scalar>::Zero(F.ambient_dim());
  for (const auto& ui : u) {
    scale = std::max(scale, ui.norm());
    sum_sq += ui.squaredNorm();
    total += ui;
  }

  InfeasibilityCertificate cert;
  cert.tolerance = feasibility_tol(scale);
  const auto [A, b] = stacked_system(F, u);
  const Vector<Scalar> x = linalg::min_norm_lstsq(A, b);
  double stacked = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double r = (F[i].project(x) - u[i]).norm();
    cert.max_residual = std::max(cert.max_residual, r);
    stacked += r * r;
  }
  cert.stacked_residual = std::sqrt(stacked);

  const double norm_all = std::sqrt(sum_sq);
  if (norm_all > cert.tolerance && total.norm() <= 1e-12 * (1.0 + norm_all)) {
    cert.sum_zero_witness = true;
    cert.lower_bound = norm_all;
  }
  if (cert.sum_zero_witness || cert.max_residual > cert.tolerance) return cert;
  return std::nullopt;
}

template <FieldScalar Scalar>
bool uniqueness_check(const Family<Scalar>& F) {
  // ⋂ U_i⊥ = (∑ U_i)⊥
  return complement(sum(std::span<const Subspace<Scalar>>(F.subspaces()), F.ambient_dim()))
      .is_zero();
}

template <FieldScalar Scalar>
BiorthogonalReport biorthogonal_bounds(const BiorthogonalSequences<Scalar>& seqs, double tol) {
  const std::size_t K = seqs[0].size();
  if (K == 0) throw HypothesisError("nonempty", 0, "biorthogonal_bounds: empty sequences");
  const Eigen::Index n = seqs[0][0].size();
  for (std::size_t i = 0; i < 3; ++i) {
    if (seqs[i].size() != K) {
      throw HypothesisError("equal-length", i, "biorthogonal_bounds: sequences differ in length");
    }
    for (const auto& v : seqs[i]) {
      if (v.size() != n) throw DimensionMismatch("biorthogonal_bounds: vector length mismatch");
    }
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t l = 0; l < K; ++l) {
        const double want = k == l ? 1.0 : 0.0;
        if (std::abs(inner(seqs[i][k], seqs[i][l]) - Scalar(want)) > tol) {
          throw HypothesisError("orthonormal", i,
                                "biorthogonal_bounds: sequence " + std::to_string(i + 1) +
                                    " is not orthonormal");
        }
      }
    }
  }

  constexpr std::array<std::pair<std::size_t, std::size_t>, 3> kPairs{{{0, 1}, {1, 2}, {0, 2}}};
  for (const auto& [i, j] : kPairs) {
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t l = 0; l < K; ++l) {
        if (k != l && std::abs(inner(seqs[i][k], seqs[j][l])) > tol) {
          throw HypothesisError("cross-orthogonal", i,
                                "biorthogonal_bounds: u_{" + std::to_string(i + 1) + "," +
                                    std::to_string(k) + "} is not orthogonal to u_{" +
                                    std::to_string(j + 1) + "," + std::to_string(l) + "}");
        }
      }
    }
  }

  std::vector<Subspace<Scalar>> spans;
  for (const auto& s : seqs) spans.push_back(Subspace<Scalar>::from_spanning(s, n));

  BiorthogonalReport report;
  for (std::size_t p = 0; p < 3; ++p) {
    auto& out = report.pairs[p];
    std::tie(out.i, out.j) = kPairs[p];
    for (std::size_t k = 0; k < K; ++k) {
      out.sup_inner = std::max(out.sup_inner, std::abs(inner(seqs[out.i][k], seqs[out.j][k])));
    }
    out.norm = op_norm_pupv(spans[out.i], spans[out.j]);
    out.lower = out.sup_inner * out.sup_inner;
    out.upper = out.sup_inner;
    out.lower_holds = out.lower <= out.norm + tol;
    out.upper_holds = out.norm <= out.upper + tol;
    report.sqrt_sum += std::sqrt(out.sup_inner);
  }
  report.sufficient_condition = report.sqrt_sum < 1.0;
  if (report.sufficient_condition) {
    report.ibap_verdict = verify_ibap(Family<Scalar>(std::move(spans))).verdict;
  }
  return report;
}

#define IBAP_INSTANTIATE_IBAP(S)                                                          \
  template bool check_independence(const Family<S>&);                                     \
  template std::optional<std::vector<Vector<S>>> dependent_tuple(const Family<S>&);       \
  template IbapReport verify_ibap(const Family<S>&);                                      \
  template Vector<S> epsilon_solve(const Family<S>&, const Prescription<S>&, double);     \
  template std::optional<InfeasibilityCertificate> infeasibility_certificate(             \
      const Family<S>&, const Prescription<S>&);                                          \
  template bool uniqueness_check(const Family<S>&);                                       \
  template BiorthogonalReport biorthogonal_bounds(const BiorthogonalSequences<S>&, double);

IBAP_INSTANTIATE_IBAP(double)
IBAP_INSTANTIATE_IBAP(std::complex<double>)

#undef IBAP_INSTANTIATE_IBAP

}  // namespace ibap
