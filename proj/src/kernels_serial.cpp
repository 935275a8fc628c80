#include "vvs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace vvs::kernels {

namespace {

// Uniform double in [0,1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::array<double, 6> TrialModel::probabilities(std::size_t k, double th) const {
  const std::size_t nf = frequencies.size();
  std::array<double, 6> quantum{};
  for (std::size_t cell = 0; cell < 6; ++cell) {
    const cplx* c = &coeffs[(k * 6 + cell) * nf];
    double p = 0.0;
    for (std::size_t f = 0; f < nf; ++f) {
      const double ph = frequencies[f] * th;
      p += c[f].real() * std::cos(ph) - c[f].imag() * std::sin(ph);
    }
    quantum[cell] = std::max(p, 0.0);
  }
  std::array<double, 6> out{};
  double total = 0.0;
  for (std::size_t a = 0; a < 2; ++a) {
    const double plus = quantum[a * 3], minus = quantum[a * 3 + 1], lost = quantum[a * 3 + 2];
    out[a * 3] = bob_efficiency * plus;
    out[a * 3 + 1] = bob_efficiency * minus;
    out[a * 3 + 2] = lost + (1.0 - bob_efficiency) * (plus + minus);
    total += plus + minus + lost;
  }
  for (auto& p : out) p /= total;
  return out;
}

double TrialModel::setting_theta(std::size_t k) const {
  if (n_settings < 2) return theta_lo;
  return theta_lo + (theta_hi - theta_lo) * static_cast<double>(k) / static_cast<double>(n_settings - 1);
}

std::uint64_t block_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace detail {

void run_block(const TrialModel& model, std::uint64_t seed, std::uint64_t block_index,
               std::uint64_t count, CountTable& tally) {
  std::mt19937_64 rng(block_seed(seed, block_index));
  const std::size_t n = model.n_settings;

  std::vector<std::array<double, 6>> cached;
  if (model.theta_mode != ThetaMode::uniform_per_trial) {
    cached.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
      cached.push_back(model.probabilities(
          k, model.theta_mode == ThetaMode::fixed ? model.theta : model.setting_theta(k)));
  }

  static constexpr int kAlice[6] = {1, 1, 1, -1, -1, -1};
  static constexpr int kBob[6] = {1, -1, 0, 1, -1, 0};
  for (std::uint64_t t = 0; t < count; ++t) {
    const auto k = std::min(n - 1, static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n)));
    std::array<double, 6> p;
    if (model.theta_mode == ThetaMode::uniform_per_trial) {
      const double th = model.theta_lo + (model.theta_hi - model.theta_lo) * unit_uniform(rng);
      p = model.probabilities(k, th);
    } else {
      p = cached[k];
    }
    const double u = unit_uniform(rng);
    std::size_t cell = 5;
    double acc = 0.0;
    for (std::size_t c = 0; c < 5; ++c) {
      acc += p[c];
      if (u < acc) {
        cell = c;
        break;
      }
    }
    tally[k].add(kAlice[cell], kBob[cell]);
  }
}

}  // namespace detail

CountTable tally_trials_serial(const TrialModel& model, std::uint64_t trials, std::uint64_t seed) {
  CountTable tally(model.n_settings);
  const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    const std::uint64_t count = std::min(kTrialBlock, trials - b * kTrialBlock);
    detail::run_block(model, seed, b, count, tally);
  }
  return tally;
}

std::vector<BlochVector> sphere_grid(double resolution) {
  if (!(resolution > 0.0)) throw DomainError("sphere grid resolution must be positive");
  const auto rings = static_cast<int>(std::ceil(M_PI / resolution));
  std::vector<BlochVector> grid;
  for (int i = 0; i <= rings; ++i) {
    const double polar = M_PI * i / rings;
    const double s = std::sin(polar);
    const int points = std::max(1, static_cast<int>(std::ceil(2.0 * M_PI * s / resolution)));
    for (int j = 0; j < points; ++j) {
      const double az = 2.0 * M_PI * j / points;
      grid.push_back({s * std::cos(az), s * std::sin(az), std::cos(polar)});
    }
  }
  return grid;
}

std::vector<double> sphere_search_serial(const std::vector<BlochVector>& vectors,
                                         const std::vector<BlochVector>& grid) {
  std::vector<double> best(vectors.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (const auto& g : grid) best[i] = std::max(best[i], vectors[i].dot(g));
  return best;
}

std::vector<BoundResult> bound_grid_serial(const MeasurementSet& set, const std::vector<double>& xi,
                                           AnnounceConstraint mode) {
  std::vector<BoundResult> out;
  out.reserve(xi.size());
  for (double x : xi) out.push_back(loss_tolerant_bound(set, x, mode));
  return out;
}

}  // namespace vvs::kernels
