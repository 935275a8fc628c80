// Hand-rolled generators shared by the property tests.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "vvs/qmath.hpp"

namespace vvs::testing {

inline CMatrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = cplx(g(rng), g(rng));
  return m;
}

inline StateVector random_state(std::mt19937_64& rng, std::size_t dim) {
  return StateVector::normalized(random_matrix(rng, static_cast<Eigen::Index>(dim), 1).col(0));
}

// Random rank-`rank` density matrix (Wishart-style).
inline DensityMatrix random_density(std::mt19937_64& rng, std::size_t dim, std::size_t rank = 0) {
  const auto d = static_cast<Eigen::Index>(dim);
  const CMatrix g = random_matrix(rng, d, rank == 0 ? d : static_cast<Eigen::Index>(rank));
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(rho);
}

inline BlochVector random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    const BlochVector v{g(rng), g(rng), g(rng)};
    if (v.norm() > 1e-3) return v.normalized();
  }
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace vvs::testing
