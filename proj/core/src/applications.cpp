#include "ibap/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "ibap/linalg.hpp"

namespace ibap {

namespace {

Vector<cplx> extend_by_zero(Eigen::Index n, const std::vector<Eigen::Index>& mask,
                            const std::vector<cplx>& values) {
  Vector<cplx> out = Vector<cplx>::Zero(n);
  for (std::size_t j = 0; j < mask.size(); ++j) out(mask[j]) = values[j];
  return out;
}

void validate_mask(Eigen::Index n, const std::vector<Eigen::Index>& mask, std::size_t values,
                   const char* name) {
  if (mask.size() != values) {
    throw Error(std::string("masked signal: ") + name + " mask has " +
                std::to_string(mask.size()) + " indices but " + std::to_string(values) +
                " values");
  }
  std::set<Eigen::Index> seen;
  for (Eigen::Index i : mask) {
    if (i < 0 || i >= n) {
      throw Error(std::string("masked signal: ") + name + " index " + std::to_string(i) +
                  " out of range");
    }
    if (!seen.insert(i).second) {
      throw Error(std::string("masked signal: duplicate ") + name + " index " +
                  std::to_string(i));
    }
  }
}

}  // namespace

Matrix<cplx> dft_matrix(Eigen::Index n) {
  Matrix<cplx> F(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      // reduce jk mod n before forming the angle
      const double theta = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
                           static_cast<double>(n);
      F(j, k) = std::polar(scale, theta);
    }
  }
  return F;
}

Vector<cplx> dft(const Vector<cplx>& x) { return dft_matrix(x.size()) * x; }

Vector<cplx> idft(const Vector<cplx>& X) { return dft_matrix(X.size()).adjoint() * X; }

void MaskedSignalProblem::validate() const {
  if (n < 1) throw Error("masked signal: length must be positive");
  validate_mask(n, time_mask, time_values.size(), "time");
  validate_mask(n, freq_mask, freq_values.size(), "frequency");
}

Subspace<cplx> time_limited_subspace(Eigen::Index n, const std::vector<Eigen::Index>& mask) {
  Matrix<cplx> basis = Matrix<cplx>::Zero(n, static_cast<Eigen::Index>(mask.size()));
  for (std::size_t j = 0; j < mask.size(); ++j) basis(mask[j], static_cast<Eigen::Index>(j)) = 1.0;
  return Subspace<cplx>::from_orthonormal(std::move(basis));
}

Subspace<cplx> band_limited_subspace(Eigen::Index n, const std::vector<Eigen::Index>& mask) {
  const Matrix<cplx> Finv = dft_matrix(n).adjoint();
  Matrix<cplx> basis(n, static_cast<Eigen::Index>(mask.size()));
  for (std::size_t j = 0; j < mask.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = Finv.col(mask[j]);
  return Subspace<cplx>::from_orthonormal(std::move(basis));
}

bool donoho_stark_condition(const MaskedSignalProblem& p) {
  return static_cast<Eigen::Index>(p.time_mask.size() * p.freq_mask.size()) < p.n;
}

double masked_pair_norm(const MaskedSignalProblem& p) {
  p.validate();
  return op_norm_pupv(time_limited_subspace(p.n, p.time_mask),
                      band_limited_subspace(p.n, p.freq_mask));
}

std::pair<Family<cplx>, Prescription<cplx>> measurement_family(
    const MaskedSignalProblem& p, const std::vector<Vector<cplx>>& measurements,
    const std::vector<cplx>& etas) {
  p.validate();
  if (measurements.size() != etas.size()) {
    throw Error("recover_with_measurements: " + std::to_string(measurements.size()) +
                " measurements but " + std::to_string(etas.size()) + " values");
  }
  const std::set<Eigen::Index> in_A(p.time_mask.begin(), p.time_mask.end());
  std::vector<Eigen::Index> owner(static_cast<std::size_t>(p.n), -1);

  std::vector<Subspace<cplx>> subspaces;
  Prescription<cplx> u;
  for (std::size_t i = 0; i < measurements.size(); ++i) {
    const auto& v = measurements[i];
    if (v.size() != p.n) {
      throw DimensionMismatch("recover_with_measurements: measurement " + std::to_string(i) +
                              " has length " + std::to_string(v.size()));
    }
    bool outside_A = false;
    for (Eigen::Index t = 0; t < p.n; ++t) {
      if (v(t) == cplx(0.0)) continue;
      auto& o = owner[static_cast<std::size_t>(t)];
      if (o >= 0) {
        throw HypothesisError("disjoint supports", i,
                              "recover_with_measurements: support of measurement " +
                                  std::to_string(i) + " overlaps measurement " +
                                  std::to_string(o));
      }
      o = static_cast<Eigen::Index>(i);
      outside_A = outside_A || !in_A.contains(t);
    }
    if (!outside_A) {
      throw HypothesisError("support outside time mask", i,
                            "recover_with_measurements: support of measurement " +
                                std::to_string(i) + " lies inside the time mask");
    }
    subspaces.push_back(Subspace<cplx>::from_spanning(std::span(&v, 1), p.n));
    u.push_back(etas[i] * v / v.squaredNorm());
  }
  subspaces.push_back(time_limited_subspace(p.n, p.time_mask));
  u.push_back(extend_by_zero(p.n, p.time_mask, p.time_values));
  subspaces.push_back(band_limited_subspace(p.n, p.freq_mask));
  u.push_back(idft(extend_by_zero(p.n, p.freq_mask, p.freq_values)));
  return {Family<cplx>(std::move(subspaces)), std::move(u)};
}

Vector<cplx> time_frequency_recover(const MaskedSignalProblem& p) {
  p.validate();
  const auto U1 = time_limited_subspace(p.n, p.time_mask);
  const auto U2 = band_limited_subspace(p.n, p.freq_mask);
  IbapReport report = verify_ibap(Family<cplx>({U1, U2}));
  if (!report.verdict) {
    throw IbapFailure("masks too large / subspaces intersect: ||P_1 P_2|| >= 1", std::move(report));
  }
  return solve_two(AffineConstraint<cplx>(U1, extend_by_zero(p.n, p.time_mask, p.time_values)),
                   AffineConstraint<cplx>(U2, idft(extend_by_zero(p.n, p.freq_mask, p.freq_values))));
}

Vector<cplx> recover_with_measurements(const MaskedSignalProblem& p,
                                       const std::vector<Vector<cplx>>& measurements,
                                       const std::vector<cplx>& etas) {
  auto [F, u] = measurement_family(p, measurements, etas);
  IbapReport report = verify_ibap(F);
  if (!report.verdict) {
    throw IbapFailure("recover_with_measurements: constraint family fails the IBAP",
                      std::move(report));
  }
  return solve_min_norm(F, u);
}

template <FieldScalar Scalar>
Vector<Scalar> solve_moments(const Subspace<Scalar>& V, const std::vector<Vector<Scalar>>& vs,
                             const std::vector<Scalar>& etas) {
  const Eigen::Index n = V.ambient_dim();
  if (vs.size() != etas.size()) {
    throw Error("solve_moments: " + std::to_string(vs.size()) + " vectors but " +
                std::to_string(etas.size()) + " moments");
  }
  for (std::size_t i = 0; i < vs.size(); ++i) {
    detail::require_dim(V, vs[i], "solve_moments");
    if (vs[i].norm() == 0.0) {
      throw HypothesisError("nonzero", i, "solve_moments: v_" + std::to_string(i) + " is zero");
    }
  }
  const auto span_v = Subspace<Scalar>::from_spanning(vs, n);
  if (span_v.dim() != static_cast<Eigen::Index>(vs.size())) {
    throw HypothesisError("linearly independent", 0,
                          "solve_moments: moment vectors are linearly dependent");
  }
  const auto V_perp = complement(V);
  if (!intersect(V_perp, span_v).is_zero()) {
    throw HypothesisError("V-perp-intersection", 0,
                          "solve_moments: V⊥ ∩ span{v_i} is not {0}");
  }

  std::vector<Subspace<Scalar>> subspaces;
  Prescription<Scalar> u;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    subspaces.push_back(Subspace<Scalar>::from_spanning(std::span(&vs[i], 1), n));
    u.push_back(etas[i] * vs[i] / vs[i].squaredNorm());
  }
  subspaces.push_back(V_perp);
  u.push_back(Vector<Scalar>::Zero(n));
  return solve_min_norm(Family<Scalar>(std::move(subspaces)), u);
}

template <FieldScalar Scalar>
Vector<Scalar> solve_operator_system(const std::vector<Matrix<Scalar>>& Ts,
                                     const std::vector<Vector<Scalar>>& ys) {
  if (Ts.empty()) throw Error("solve_operator_system: no operators");
  if (Ts.size() != ys.size()) throw Error("solve_operator_system: operator/value count mismatch");
  const Eigen::Index n = Ts.front().cols();

  std::vector<Subspace<Scalar>> subspaces;
  Prescription<Scalar> u;
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    const auto& T = Ts[i];
    if (T.cols() != n || T.rows() != ys[i].size()) {
      throw DimensionMismatch("solve_operator_system: operator " + std::to_string(i) +
                              " has incompatible shape");
    }
    // U_i = (ker T_i)⊥ = ran T_i^H, and u_i = T_i^+ y_i ∈ U_i solves T_i u_i = y_i.
    subspaces.push_back(Subspace<Scalar>::from_columns(T.adjoint()));
    const Vector<Scalar> ui = linalg::min_norm_lstsq<Scalar>(T, ys[i]);
    if ((T * ui - ys[i]).norm() > 1e-8 * (1.0 + ys[i].norm())) {
      throw HypothesisError("range", i,
                            "solve_operator_system: y_" + std::to_string(i) +
                                " is not in the range of T_" + std::to_string(i));
    }
    u.push_back(subspaces.back().project(ui));
  }

  Family<Scalar> F(std::move(subspaces));
  const auto trailing = trailing_sums(F);
  for (std::size_t i = 0; i + 1 < F.size(); ++i) {
    // ker T_i + ⋂_{j>i} ker T_j = U_i⊥ + U_{i+}⊥
    if (sum(complement(F[i]), complement(trailing[i])).dim() != n) {
      throw HypothesisError("kernel-sum", i,
                            "solve_operator_system: ker T_" + std::to_string(i) +
                                " + ⋂ ker T_j (j > " + std::to_string(i) + ") is not the whole space");
    }
  }
  return solve_min_norm(F, u);
}

void SlowFamilySpec::validate() const {
  if (alphas.empty()) throw Error("slow family: N must be positive");
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    if (!(alphas[k] > 0.0)) {
      throw Error("slow family: alpha_" + std::to_string(k) + " must be positive");
    }
  }
}

SlowFamilySpec SlowFamilySpec::constant(std::size_t N, double a) {
  return {std::vector<double>(N, a)};
}

SlowFamilySpec SlowFamilySpec::harmonic(std::size_t N) {
  SlowFamilySpec spec;
  for (std::size_t k = 0; k < N; ++k) spec.alphas.push_back(1.0 / static_cast<double>(k + 1));
  return spec;
}

SlowFamily slow_family(const SlowFamilySpec& spec) {
  spec.validate();
  const auto N = static_cast<Eigen::Index>(spec.size());
  Matrix<double> B1 = Matrix<double>::Zero(2 * N, N);
  Matrix<double> B2 = Matrix<double>::Zero(2 * N, N);
  double predicted = 0.0;
  std::size_t worst = 0;
  for (Eigen::Index k = 0; k < N; ++k) {
    const double a = spec.alphas[static_cast<std::size_t>(k)];
    const double s = std::sqrt(1.0 + a * a);
    B1(2 * k, k) = 1.0;
    B2(2 * k, k) = 1.0 / s;
    B2(2 * k + 1, k) = a / s;
    if (1.0 / s > predicted) {
      predicted = 1.0 / s;
      worst = static_cast<std::size_t>(k);
    }
  }
  return {Family<double>({Subspace<double>::from_orthonormal(std::move(B1)),
                          Subspace<double>::from_orthonormal(std::move(B2))}),
          predicted, worst};
}

SlowDemoResult slow_convergence_demo(const SlowFamilySpec& spec, const Vector<double>& r,
                                     const SolveOptions& opts) {
  const SlowFamily sf = slow_family(spec);
  const Eigen::Index n = sf.family.ambient_dim();
  const Prescription<double> zero(2, Vector<double>::Zero(n));

  SolveOptions traced = opts;
  traced.record_trace = true;
  SlowDemoResult out;
  out.trace = best_approximation(r, sf.family, zero, traced).second;
  out.predicted_norm = sf.predicted_norm;
  out.worst_block = sf.worst_block;

  // Starting on U_1⊥ inside the extremal block, each sweep contracts by the same factor.
  Vector<double> e = Vector<double>::Zero(n);
  e(2 * static_cast<Eigen::Index>(sf.worst_block) + 1) = 1.0;
  SolveOptions probe;
  probe.max_iter = 2;
  probe.tol = std::numeric_limits<double>::min();
  probe.record_trace = true;
  const auto rows = best_approximation(e, sf.family, zero, probe).second.iterations;
  out.worst_block_ratio = rows.size() == 2 && *rows[0].dist_to_solution > 0.0
                              ? *rows[1].dist_to_solution / *rows[0].dist_to_solution
                              : 0.0;
  return out;
}

template Vector<double> solve_moments(const Subspace<double>&, const std::vector<Vector<double>>&,
                                      const std::vector<double>&);
template Vector<cplx> solve_moments(const Subspace<cplx>&, const std::vector<Vector<cplx>>&,
                                    const std::vector<cplx>&);
template Vector<double> solve_operator_system(const std::vector<Matrix<double>>&,
                                              const std::vector<Vector<double>>&);
template Vector<cplx> solve_operator_system(const std::vector<Matrix<cplx>>&,
                                            const std::vector<Vector<cplx>>&);

}  // namespace ibap
