// Measurement settings, Bob's receiver model and the steering parameter
//   S_n = (1/n) sum_k < sigma^A_k B_k >
// evaluated either exactly from a state or empirically from outcome counts.
//
// Sign convention: B_k is the negated raw analyzer outcome, so the singlet's
// perfect anticorrelation gives S_n = +1. Correlations are conditioned on
// Bob announcing (non-null) per setting; settings are weighted uniformly.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "vvs/encoding.hpp"
#include "vvs/qmath.hpp"

namespace vvs {

class MeasurementSet {
 public:
  /// Requires n >= 2 unit directions, no two equal or antipodal.
  explicit MeasurementSet(std::vector<BlochVector> directions);

  std::size_t size() const { return dirs_.size(); }
  const BlochVector& operator[](std::size_t k) const { return dirs_[k]; }
  const std::vector<BlochVector>& directions() const { return dirs_; }

 private:
  std::vector<BlochVector> dirs_;
};

/// Canonical sets: 2 (z, x), 3 (z, x, y), 4 (tetrahedron), 6 (icosahedron
/// axes). The z-axis member is always first.
MeasurementSet platonic_set(int n);

/// Bob's measuring device for a given encoding.
struct Receiver {
  Encoding encoding = Encoding::vortex;
  OamSpace space{};
  QPlate plate{};

  /// Dimension of Bob's photon space: 2 (polarization) or 2 * |OAM range|.
  std::size_t bob_dim() const;
  CMatrix analyzer(const BlochVector& u, double theta, int outcome) const;
  /// Zero matrix for the polarization encoding.
  CMatrix null_projector(double theta) const;
};

struct SteeringEstimate {
  double s_value = 0.0;
  double std_err = 0.0;
  double announce_fraction = 0.0;
  std::vector<double> per_setting_correlations;
};

/// Exact S_n of a distributed two-photon state (Alice pol (x) Bob space).
SteeringEstimate steering_parameter_exact(const DensityMatrix& rho, const MeasurementSet& set,
                                          const Receiver& receiver, double theta);

/// Outcome tally for one setting.
/// counts[a][b]: a = 0 for Alice +1, 1 for Alice -1; b = 0 (+1), 1 (-1), 2 (null).
struct SettingTally {
  std::array<std::array<std::uint64_t, 3>, 2> counts{};

  void add(int alice_outcome, int bob_outcome_or_zero, std::uint64_t times = 1);
  std::uint64_t total() const;
  std::uint64_t announced() const;
  /// Announced rounds with alice == -bob, i.e. alice * B = +1.
  std::uint64_t agree() const;
  std::uint64_t disagree() const { return announced() - agree(); }
  SettingTally& operator+=(const SettingTally& o);
  bool operator==(const SettingTally& o) const = default;
};

using CountTable = std::vector<SettingTally>;

/// Empirical S_n. std_err is one binomial standard deviation (statistical only).
/// Throws DomainError if any setting has zero announced events.
SteeringEstimate steering_parameter_counts(const CountTable& counts);

}  // namespace vvs
