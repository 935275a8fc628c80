// Finite-statistics steering experiments: noisy state preparation, receiver
// orientation policy, channel loss, sampling, estimation and the verdict
// against the loss-tolerant bound at the observed announce fraction.
#pragma once

#include <cstdint>
#include <vector>

#include "vvs/bounds.hpp"
#include "vvs/encoding.hpp"
#include "vvs/kernels.hpp"
#include "vvs/steering.hpp"

namespace vvs {

/// Werner mixture about the polarization singlet, optionally followed by
/// phase damping of Bob's H/V coherence.
struct NoiseModel {
  double werner_v = 1.0;
  double dephasing = 0.0;

  static NoiseModel from_fidelity(double fidelity) { return {werner_v_from_fidelity(fidelity), 0.0}; }
  void validate() const;
};

struct ChannelModel {
  double bob_efficiency = 1.0;
  /// Trusted side: only rescales how many pairs are needed per heralded trial.
  double alice_efficiency = 1.0;

  void validate() const;
};

struct ThetaPolicy {
  kernels::ThetaMode mode = kernels::ThetaMode::fixed;
  double theta = 0.0;             // radians, fixed mode
  double lo = 0.0;                // radians, sampled modes
  double hi = 0.5 * 3.14159265358979323846;

  static ThetaPolicy fixed(double theta_rad) { return {kernels::ThetaMode::fixed, theta_rad, 0.0, 0.0}; }
  /// Uniform over [0, 90 deg]: per trial, or one evenly spaced orientation per setting.
  static ThetaPolicy dynamic(bool per_setting = false);
};

struct ExperimentOptions {
  AnnounceConstraint constraint = AnnounceConstraint::average;
  bool parallel = true;
};

struct SteeringRunResult {
  std::size_t n = 0;
  Encoding encoding = Encoding::vortex;
  ThetaPolicy theta_policy;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  CountTable counts;
  SteeringEstimate estimate;
  double bound_at_observed_xi = 0.0;
  /// s_value - 2 std_err > bound_at_observed_xi.
  bool violated = false;

  bool operator==(const SteeringRunResult& o) const;
};

/// Distributed state for the encoding: 4x4 (polarization) or 2 x pol(x)OAM (vortex).
DensityMatrix prepare_state(const NoiseModel& noise, Encoding encoding, const OamSpace& space = {},
                            const QPlate& plate = {});

/// Exact outcome model of one round as a function of Bob's orientation.
kernels::TrialModel build_trial_model(const DensityMatrix& state, const MeasurementSet& set,
                                      const Receiver& receiver, const ChannelModel& channel,
                                      const ThetaPolicy& policy);

/// Throws DomainError for trials < n or a setting without announced events.
SteeringRunResult run_experiment(const DensityMatrix& state, const MeasurementSet& set,
                                 const Receiver& receiver, const ChannelModel& channel,
                                 const ThetaPolicy& policy, std::uint64_t trials, std::uint64_t seed,
                                 const ExperimentOptions& options = {});

/// Seed of point `index` in a sweep.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// One fixed-orientation run per theta (radians, within [0, 2 pi)).
std::vector<SteeringRunResult> sweep_theta(const DensityMatrix& state, const MeasurementSet& set,
                                           const Receiver& receiver, const ChannelModel& channel,
                                           const std::vector<double>& thetas,
                                           std::uint64_t trials_per_point, std::uint64_t seed,
                                           const ExperimentOptions& options = {});

SteeringRunResult dynamic_rotation_run(const DensityMatrix& state, const MeasurementSet& set,
                                       const Receiver& receiver, const ChannelModel& channel,
                                       std::uint64_t trials, std::uint64_t seed,
                                       bool per_setting = false, const ExperimentOptions& options = {});

/// Decides the verdict with the two-standard-deviation rule.
bool is_violation(const SteeringEstimate& est, double bound);

}  // namespace vvs
