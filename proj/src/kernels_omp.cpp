#include <omp.h>

#include <algorithm>
#include <exception>
#include <limits>

#include "vvs/kernels.hpp"

namespace vvs::kernels {

CountTable tally_trials_parallel(const TrialModel& model, std::uint64_t trials, std::uint64_t seed) {
  const auto blocks = static_cast<std::int64_t>((trials + kTrialBlock - 1) / kTrialBlock);
  CountTable total(model.n_settings);

#pragma omp parallel
  {
    CountTable local(model.n_settings);
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
      const auto bi = static_cast<std::uint64_t>(b);
      const std::uint64_t count = std::min(kTrialBlock, trials - bi * kTrialBlock);
      detail::run_block(model, seed, bi, count, local);
    }
#pragma omp critical
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += local[k];
  }
  return total;
}

std::vector<double> sphere_search_parallel(const std::vector<BlochVector>& vectors,
                                           const std::vector<BlochVector>& grid) {
  std::vector<double> best(vectors.size(), -std::numeric_limits<double>::infinity());
  const auto nv = static_cast<std::int64_t>(vectors.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < nv; ++i) {
    const BlochVector v = vectors[static_cast<std::size_t>(i)];
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& g : grid) m = std::max(m, v.dot(g));
    best[static_cast<std::size_t>(i)] = m;
  }
  return best;
}

std::vector<BoundResult> bound_grid_parallel(const MeasurementSet& set, const std::vector<double>& xi,
                                             AnnounceConstraint mode) {
  std::vector<BoundResult> out(xi.size());
  std::exception_ptr error;
  const auto np = static_cast<std::int64_t>(xi.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < np; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = loss_tolerant_bound(set, xi[static_cast<std::size_t>(i)], mode);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace vvs::kernels
