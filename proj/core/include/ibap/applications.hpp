#pragma once

#include <complex>
#include <vector>

#include "ibap/solver.hpp"

namespace ibap {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Unitary DFT: X[k] = n^{-1/2} sum_j x[j] exp(-2 pi i jk / n), indices 0..n-1.
// ---------------------------------------------------------------------------

Matrix<cplx> dft_matrix(Eigen::Index n);
Vector<cplx> dft(const Vector<cplx>& x);
Vector<cplx> idft(const Vector<cplx>& X);

/// Prescribed samples on a time mask A and DFT coefficients on a frequency mask B.
struct MaskedSignalProblem {
  Eigen::Index n = 0;
  std::vector<Eigen::Index> time_mask;
  std::vector<Eigen::Index> freq_mask;
  std::vector<cplx> time_values;
  std::vector<cplx> freq_values;

  void validate() const;
};

/// Signals supported on A, {x : x 1_{∁A} = 0}.
Subspace<cplx> time_limited_subspace(Eigen::Index n, const std::vector<Eigen::Index>& mask);

/// Signals whose spectrum is supported on B, {x : x̂ 1_{∁B} = 0}.
Subspace<cplx> band_limited_subspace(Eigen::Index n, const std::vector<Eigen::Index>& mask);

/// Discrete uncertainty shortcut |A| |B| < n, sufficient for U_1 ∩ U_2 = {0}.
bool donoho_stark_condition(const MaskedSignalProblem& p);

/// ||P_1 P_2|| for the time- and band-limited pair of the problem.
double masked_pair_norm(const MaskedSignalProblem& p);

/// Minimal-norm x with x[A] = a and DFT(x)[B] = b.
Vector<cplx> time_frequency_recover(const MaskedSignalProblem& p);

/// Minimal-norm x with <x, m_i> = eta_i in addition to the masked constraints.
/// Measurement supports must be pairwise disjoint and not contained in A.
Vector<cplx> recover_with_measurements(const MaskedSignalProblem& p,
                                       const std::vector<Vector<cplx>>& measurements,
                                       const std::vector<cplx>& etas);

/// Family and prescription for recover_with_measurements, in constraint order
/// (measurements, time mask, frequency mask).
std::pair<Family<cplx>, Prescription<cplx>> measurement_family(
    const MaskedSignalProblem& p, const std::vector<Vector<cplx>>& measurements,
    const std::vector<cplx>& etas);

// ---------------------------------------------------------------------------
// Moment problems and operator systems
// ---------------------------------------------------------------------------

/// Minimal-norm x ∈ V with <x, v_i> = eta_i.
template <FieldScalar Scalar>
Vector<Scalar> solve_moments(const Subspace<Scalar>& V, const std::vector<Vector<Scalar>>& vs,
                             const std::vector<Scalar>& etas);

/// Minimal-norm x with T_i x = y_i for every i. Requires
/// ker T_i + ⋂_{j>i} ker T_j = H at every level.
template <FieldScalar Scalar>
Vector<Scalar> solve_operator_system(const std::vector<Matrix<Scalar>>& Ts,
                                     const std::vector<Vector<Scalar>>& ys);

// ---------------------------------------------------------------------------
// Slowly converging two-subspace families in R^{2N}:
// U_1 = span{e_{2n}}, U_2 = span{f_n}, f_n = (e_{2n} + a_n e_{2n+1}) / sqrt(1 + a_n^2).
// ---------------------------------------------------------------------------

struct SlowFamilySpec {
  std::vector<double> alphas;

  std::size_t size() const noexcept { return alphas.size(); }
  void validate() const;

  static SlowFamilySpec constant(std::size_t N, double a);
  static SlowFamilySpec harmonic(std::size_t N);  // a_n = 1/(n+1)
};

struct SlowFamily {
  Family<double> family;
  double predicted_norm = 0.0;  // max_n 1/sqrt(1 + a_n^2)
  std::size_t worst_block = 0;
};

SlowFamily slow_family(const SlowFamilySpec& spec);

struct SlowDemoResult {
  ConvergenceTrace trace;       // from the supplied starting vector
  double predicted_norm = 0.0;
  std::size_t worst_block = 0;
  double worst_block_ratio = 0.0;  // per-sweep contraction from e_{2k+1}, k = worst_block
};

SlowDemoResult slow_convergence_demo(const SlowFamilySpec& spec, const Vector<double>& r,
                                     const SolveOptions& opts = {});

}  // namespace ibap
