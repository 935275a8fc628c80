// Data-parallel inner loops. Each kernel has an OpenMP version used by the
// library and a serial reference kept for tests and benchmarks; both produce
// bit-identical results because work is split into fixed, seed-derived blocks
// and combined with commutative integer sums or max-reductions.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "vvs/bounds.hpp"
#include "vvs/qmath.hpp"
#include "vvs/steering.hpp"

namespace vvs::kernels {

enum class ThetaMode { fixed, uniform_per_trial, per_setting };

/// Round-level outcome model. For setting k, Alice outcome a and Bob result b
/// (+1, -1, null) the quantum probability is Re sum_f c_f exp(i d_f theta);
/// channel loss is folded in afterwards.
struct TrialModel {
  std::size_t n_settings = 0;
  std::vector<int> frequencies;
  /// Index ((k * 2 + a) * 3 + b) * frequencies.size() + f.
  std::vector<cplx> coeffs;
  double bob_efficiency = 1.0;
  ThetaMode theta_mode = ThetaMode::fixed;
  double theta = 0.0;     // fixed mode
  double theta_lo = 0.0;  // sampled modes
  double theta_hi = 0.0;

  /// Six probabilities ordered (a=+1: b=+1,-1,null), (a=-1: b=+1,-1,null),
  /// including channel loss; nonnegative and summing to 1.
  std::array<double, 6> probabilities(std::size_t k, double theta) const;
  /// Orientation used for setting k in per_setting mode.
  double setting_theta(std::size_t k) const;
};

inline constexpr std::uint64_t kTrialBlock = 1u << 16;

/// Seed of block `index` derived from the master seed (splitmix64).
std::uint64_t block_seed(std::uint64_t master, std::uint64_t index);

/// Samples `trials` rounds and tallies them per setting.
CountTable tally_trials_serial(const TrialModel& model, std::uint64_t trials, std::uint64_t seed);
CountTable tally_trials_parallel(const TrialModel& model, std::uint64_t trials, std::uint64_t seed);

/// Grid points used by the bound oracle (spacing `resolution` radians, poles included).
std::vector<BlochVector> sphere_grid(double resolution);

/// For each vector v, max over grid points g of v . g.
std::vector<double> sphere_search_serial(const std::vector<BlochVector>& vectors,
                                         const std::vector<BlochVector>& grid);
std::vector<double> sphere_search_parallel(const std::vector<BlochVector>& vectors,
                                           const std::vector<BlochVector>& grid);

/// loss_tolerant_bound at every grid point, results in grid order.
std::vector<BoundResult> bound_grid_serial(const MeasurementSet& set, const std::vector<double>& xi,
                                           AnnounceConstraint mode);
std::vector<BoundResult> bound_grid_parallel(const MeasurementSet& set, const std::vector<double>& xi,
                                             AnnounceConstraint mode);

namespace detail {
/// Samples one block of rounds into `tally` (n_settings entries).
void run_block(const TrialModel& model, std::uint64_t seed, std::uint64_t block_index,
               std::uint64_t count, CountTable& tally);
}  // namespace detail

}  // namespace vvs::kernels
