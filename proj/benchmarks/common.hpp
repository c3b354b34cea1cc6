#pragma once

#include <random>

#include "ibap/family.hpp"

namespace bench {

inline ibap::Subspace<double> random_subspace(std::mt19937_64& gen, Eigen::Index n, Eigen::Index k) {
  std::normal_distribution<double> normal;
  std::vector<ibap::Vector<double>> vs;
  for (Eigen::Index j = 0; j < k; ++j) {
    ibap::Vector<double> v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(gen);
    vs.push_back(v);
  }
  return ibap::Subspace<double>::from_spanning(vs, n);
}

// m generic subspaces of dimension n / (2m) in R^n.
inline ibap::Family<double> random_family(std::mt19937_64& gen, Eigen::Index n, std::size_t m) {
  std::vector<ibap::Subspace<double>> subs;
  const Eigen::Index k = std::max<Eigen::Index>(1, n / static_cast<Eigen::Index>(2 * m));
  for (std::size_t i = 0; i < m; ++i) subs.push_back(random_subspace(gen, n, k));
  return ibap::Family<double>(std::move(subs));
}

inline ibap::Prescription<double> random_prescription(std::mt19937_64& gen, const ibap::Family<double>& F) {
  std::normal_distribution<double> normal;
  ibap::Prescription<double> u;
  for (const auto& U : F) {
    ibap::Vector<double> c(U.dim());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(gen);
    u.push_back(U.basis() * c);
  }
  return u;
}

}  // namespace bench
