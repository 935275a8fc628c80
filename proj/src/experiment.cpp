#include "vvs/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace vvs {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Tr_A[(P (x) I) rho] for a 2 x d bipartite rho.
CMatrix bob_conditional(const CMatrix& rho, const CMatrix& alice_proj, std::size_t d) {
  CMatrix out = CMatrix::Zero(idx(d), idx(d));
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j)
      if (alice_proj(j, i) != cplx(0.0))
        out += alice_proj(j, i) * rho.block(i * idx(d), j * idx(d), idx(d), idx(d));
  return out;
}

}  // namespace

void NoiseModel::validate() const {
  if (!(werner_v >= 0.0 && werner_v <= 1.0)) throw DomainError("Werner visibility must lie in [0,1]");
  if (!(dephasing >= 0.0 && dephasing <= 1.0)) throw DomainError("dephasing must lie in [0,1]");
}

void ChannelModel::validate() const {
  if (!(bob_efficiency > 0.0 && bob_efficiency <= 1.0))
    throw DomainError("Bob efficiency must lie in (0,1]");
  if (!(alice_efficiency > 0.0 && alice_efficiency <= 1.0))
    throw DomainError("Alice efficiency must lie in (0,1]");
}

ThetaPolicy ThetaPolicy::dynamic(bool per_setting) {
  ThetaPolicy p;
  p.mode = per_setting ? kernels::ThetaMode::per_setting : kernels::ThetaMode::uniform_per_trial;
  return p;
}

bool SteeringRunResult::operator==(const SteeringRunResult& o) const {
  return n == o.n && encoding == o.encoding && theta_policy.mode == o.theta_policy.mode &&
         theta_policy.theta == o.theta_policy.theta && trials == o.trials && seed == o.seed &&
         counts == o.counts && estimate.s_value == o.estimate.s_value &&
         estimate.std_err == o.estimate.std_err &&
         estimate.announce_fraction == o.estimate.announce_fraction &&
         bound_at_observed_xi == o.bound_at_observed_xi && violated == o.violated;
}

DensityMatrix prepare_state(const NoiseModel& noise, Encoding encoding, const OamSpace& space,
                            const QPlate& plate) {
  noise.validate();
  DensityMatrix rho = werner_state(noise.werner_v);
  if (noise.dephasing > 0.0) {
    const CMatrix z = kron(CMatrix::Identity(2, 2), pauli_z());
    const double p = noise.dephasing;
    rho = DensityMatrix((1.0 - 0.5 * p) * rho.matrix() + 0.5 * p * z * rho.matrix() * z);
  }
  if (encoding == Encoding::polarization) return rho;
  return encode_bob_photon(rho, space, plate);
}

kernels::TrialModel build_trial_model(const DensityMatrix& state, const MeasurementSet& set,
                                      const Receiver& receiver, const ChannelModel& channel,
                                      const ThetaPolicy& policy) {
  channel.validate();
  const std::size_t d = receiver.bob_dim();
  if (state.dim() != 2 * d) throw DimensionError("state dimension does not match the receiver's encoding");

  const RotationGenerator gen =
      rotation_generator(receiver.encoding == Encoding::polarization ? OamSpace::gaussian() : receiver.space);
  const CMatrix& w = gen.basis;

  // Collect coefficients per frequency first; frequencies are small integers.
  const std::size_t n = set.size();
  std::vector<std::map<int, cplx>> cells(n * 6);
  for (std::size_t k = 0; k < n; ++k) {
    std::array<CMatrix, 3> bob_ops = {receiver.analyzer(set[k], 0.0, 1), receiver.analyzer(set[k], 0.0, -1),
                                      receiver.null_projector(0.0)};
    for (auto& m : bob_ops) m = (w.adjoint() * m * w).eval();
    for (std::size_t a = 0; a < 2; ++a) {
      const CMatrix pa = polarization_projector(set[k], a == 0 ? 1 : -1).matrix();
      const CMatrix sigma = w.adjoint() * bob_conditional(state.matrix(), pa, d) * w;
      for (std::size_t b = 0; b < 3; ++b) {
        auto& poly = cells[(k * 2 + a) * 3 + b];
        for (std::size_t p = 0; p < d; ++p)
          for (std::size_t q = 0; q < d; ++q) {
            const cplx term = sigma(idx(q), idx(p)) * bob_ops[b](idx(p), idx(q));
            if (std::abs(term) < 1e-15) continue;
            poly[gen.j[q] - gen.j[p]] += term;
          }
      }
    }
  }

  kernels::TrialModel model;
  model.n_settings = n;
  model.bob_efficiency = channel.bob_efficiency;
  model.theta_mode = policy.mode;
  model.theta = policy.theta;
  model.theta_lo = policy.lo;
  model.theta_hi = policy.hi;
  for (const auto& poly : cells)
    for (const auto& [f, c] : poly)
      if (std::find(model.frequencies.begin(), model.frequencies.end(), f) == model.frequencies.end())
        model.frequencies.push_back(f);
  std::sort(model.frequencies.begin(), model.frequencies.end());
  if (model.frequencies.empty()) model.frequencies.push_back(0);
  const std::size_t nf = model.frequencies.size();
  model.coeffs.assign(cells.size() * nf, cplx(0.0));
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (const auto& [f, v] : cells[c]) {
      const auto pos = std::lower_bound(model.frequencies.begin(), model.frequencies.end(), f) -
                       model.frequencies.begin();
      model.coeffs[c * nf + static_cast<std::size_t>(pos)] = v;
    }
  return model;
}

bool is_violation(const SteeringEstimate& est, double bound) {
  return est.s_value - 2.0 * est.std_err > bound;
}

SteeringRunResult run_experiment(const DensityMatrix& state, const MeasurementSet& set,
                                 const Receiver& receiver, const ChannelModel& channel,
                                 const ThetaPolicy& policy, std::uint64_t trials, std::uint64_t seed,
                                 const ExperimentOptions& options) {
  if (trials < set.size()) throw DomainError("trials must be at least the number of settings");
  const kernels::TrialModel model = build_trial_model(state, set, receiver, channel, policy);

  SteeringRunResult r;
  r.n = set.size();
  r.encoding = receiver.encoding;
  r.theta_policy = policy;
  r.trials = trials;
  r.seed = seed;
  r.counts = options.parallel ? kernels::tally_trials_parallel(model, trials, seed)
                              : kernels::tally_trials_serial(model, trials, seed);
  r.estimate = steering_parameter_counts(r.counts);
  r.bound_at_observed_xi = loss_tolerant_bound(set, r.estimate.announce_fraction, options.constraint).c;
  r.violated = is_violation(r.estimate, r.bound_at_observed_xi);
  return r;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // Distinct stream from the per-block derivation used inside a run.
  return kernels::block_seed(master ^ 0xA5A5A5A5A5A5A5A5ull, index);
}

std::vector<SteeringRunResult> sweep_theta(const DensityMatrix& state, const MeasurementSet& set,
                                           const Receiver& receiver, const ChannelModel& channel,
                                           const std::vector<double>& thetas,
                                           std::uint64_t trials_per_point, std::uint64_t seed,
                                           const ExperimentOptions& options) {
  for (double th : thetas)
    if (!(th >= 0.0 && th < 2.0 * M_PI)) throw DomainError("sweep angles must lie in [0, 360) degrees");
  std::vector<SteeringRunResult> out;
  out.reserve(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i)
    out.push_back(run_experiment(state, set, receiver, channel, ThetaPolicy::fixed(thetas[i]),
                                 trials_per_point, derive_seed(seed, i), options));
  return out;
}

SteeringRunResult dynamic_rotation_run(const DensityMatrix& state, const MeasurementSet& set,
                                       const Receiver& receiver, const ChannelModel& channel,
                                       std::uint64_t trials, std::uint64_t seed, bool per_setting,
                                       const ExperimentOptions& options) {
  return run_experiment(state, set, receiver, channel, ThetaPolicy::dynamic(per_setting), trials, seed,
                        options);
}

}  // namespace vvs
