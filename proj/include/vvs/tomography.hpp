// Simulated two-qubit state tomography: projective settings, count sampling,
// linear inversion and maximum-likelihood refinement.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vvs/qmath.hpp"
#include "vvs/steering.hpp"

namespace vvs {

struct TomographySpec {
  /// Joint projectors Pi_A (x) Pi_B (4x4).
  std::vector<CMatrix> projectors;
  std::vector<std::string> labels;
  /// Settings sharing one (unknown) normalization. Groups whose projectors
  /// sum to the identity are complete and sampled multinomially; other groups
  /// are Poisson-sampled.
  std::vector<std::vector<std::size_t>> groups;
  /// Coincidences per complete group, or the mean rate scale for Poisson groups.
  std::uint64_t counts_per_setting = 100000;

  std::size_t size() const { return projectors.size(); }
};

/// The 36 settings: both parties over {H, V, D, A, L, R}, grouped into the 9
/// measurement-basis pairs.
TomographySpec standard_settings(std::uint64_t counts_per_setting = 100000);

/// The 16-setting minimal set, one normalization group.
TomographySpec minimal_settings(std::uint64_t counts_per_setting = 100000);

/// Rank of the settings' Gram matrix over the 16 real Hermitian parameters.
int gram_rank(const TomographySpec& spec);

using CountVector = std::vector<double>;

/// Born probabilities Tr(rho Pi_i).
std::vector<double> born_probabilities(const DensityMatrix& rho, const TomographySpec& spec);

/// Noiseless counts counts_per_setting * Tr(rho Pi_i).
CountVector expected_counts(const DensityMatrix& rho, const TomographySpec& spec);

CountVector simulate_counts(const DensityMatrix& rho, const TomographySpec& spec, std::uint64_t seed);

struct ReconstructionReport {
  DensityMatrix rho_hat = DensityMatrix::maximally_mixed(4);
  double fidelity_to_target = 0.0;
  double purity = 0.0;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Log-likelihood after the initial estimate and after every accepted step.
  std::vector<double> likelihood_trace;
};

/// Least-squares linear inversion; may be unphysical.
CMatrix linear_inversion(const CountVector& counts, const TomographySpec& spec);

/// Clips negative eigenvalues and renormalizes.
DensityMatrix project_to_physical(const CMatrix& m);

/// Log-likelihood of counts under rho (multinomial per group).
double log_likelihood(const DensityMatrix& rho, const CountVector& counts, const TomographySpec& spec);

/// Linear inversion, projection, then iterative maximum likelihood until the
/// log-likelihood gain drops below 1e-10 or 10^4 iterations.
/// Throws DomainError for a rank-deficient spec.
ReconstructionReport reconstruct(const CountVector& counts, const TomographySpec& spec,
                                 const StateVector& target);

/// Two-photon polarization state seen through Bob's receiver at orientation
/// theta: (I (x) V^dagger) rho (I (x) V), renormalized, where Bob's analyzer
/// outcomes are V Pi V^dagger.
DensityMatrix observed_state(const DensityMatrix& rho, const Receiver& receiver, double theta);

}  // namespace vvs
