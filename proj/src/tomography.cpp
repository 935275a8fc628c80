#include "vvs/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace vvs {

namespace {

constexpr double kLikelihoodTol = 1e-10;
constexpr int kMaxIterations = 10000;
constexpr double kStartMixing = 1e-6;

struct NamedKet {
  std::string name;
  CVector amps;
};

std::vector<NamedKet> pauli_kets() {
  return {{"H", ket_h().amplitudes()}, {"V", ket_v().amplitudes()}, {"D", ket_d().amplitudes()},
          {"A", ket_a().amplitudes()}, {"L", ket_l().amplitudes()}, {"R", ket_r().amplitudes()}};
}

CVector ket_named(const std::string& name) {
  for (const auto& k : pauli_kets())
    if (k.name == name) return k.amps;
  throw DomainError("unknown polarization label " + name);
}

CMatrix joint_projector(const CVector& a, const CVector& b) {
  const CVector ab = kron(a, b);
  return ab * ab.adjoint();
}

// Real-parameter design matrix: row i holds Tr(G_mu Pi_i) with
// G_mu = sigma_a (x) sigma_b, a, b in {I, X, Y, Z}.
Eigen::MatrixXd design_matrix(const TomographySpec& spec) {
  const std::array<CMatrix, 4> paulis = {CMatrix::Identity(2, 2), pauli_x(), pauli_y(), pauli_z()};
  Eigen::MatrixXd a(static_cast<Eigen::Index>(spec.size()), 16);
  for (std::size_t i = 0; i < spec.size(); ++i)
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q)
        a(static_cast<Eigen::Index>(i), p * 4 + q) =
            (kron(paulis[static_cast<std::size_t>(p)], paulis[static_cast<std::size_t>(q)]) *
             spec.projectors[i]).trace().real();
  return a;
}

CMatrix from_parameters(const Eigen::VectorXd& r) {
  const std::array<CMatrix, 4> paulis = {CMatrix::Identity(2, 2), pauli_x(), pauli_y(), pauli_z()};
  CMatrix m = CMatrix::Zero(4, 4);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      m += r(p * 4 + q) * kron(paulis[static_cast<std::size_t>(p)], paulis[static_cast<std::size_t>(q)]);
  return m;
}

bool group_complete(const TomographySpec& spec, const std::vector<std::size_t>& g) {
  CMatrix s = CMatrix::Zero(4, 4);
  for (std::size_t i : g) s += spec.projectors[i];
  return (s - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10;
}

DensityMatrix hermitized(const CMatrix& m) {
  CMatrix h = 0.5 * (m + m.adjoint());
  h /= h.trace().real();
  return DensityMatrix(std::move(h));
}

}  // namespace

TomographySpec standard_settings(std::uint64_t counts_per_setting) {
  TomographySpec spec;
  spec.counts_per_setting = counts_per_setting;
  const std::array<std::array<const char*, 2>, 3> bases = {{{"H", "V"}, {"D", "A"}, {"L", "R"}}};
  for (const auto& ba : bases)
    for (const auto& bb : bases) {
      std::vector<std::size_t> group;
      for (const char* a : ba)
        for (const char* b : bb) {
          group.push_back(spec.projectors.size());
          spec.projectors.push_back(joint_projector(ket_named(a), ket_named(b)));
          spec.labels.push_back(std::string(a) + b);
        }
      spec.groups.push_back(std::move(group));
    }
  return spec;
}

TomographySpec minimal_settings(std::uint64_t counts_per_setting) {
  TomographySpec spec;
  spec.counts_per_setting = counts_per_setting;
  const char* labels[16] = {"HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH",
                            "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL"};
  std::vector<std::size_t> group;
  for (const char* l : labels) {
    group.push_back(spec.projectors.size());
    spec.projectors.push_back(joint_projector(ket_named(std::string(1, l[0])), ket_named(std::string(1, l[1]))));
    spec.labels.emplace_back(l);
  }
  spec.groups.push_back(std::move(group));
  return spec;
}

int gram_rank(const TomographySpec& spec) {
  const Eigen::MatrixXd a = design_matrix(spec);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a.transpose() * a);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

std::vector<double> born_probabilities(const DensityMatrix& rho, const TomographySpec& spec) {
  if (rho.dim() != 4) throw DimensionError("tomography expects a two-qubit state");
  std::vector<double> p;
  p.reserve(spec.size());
  for (const auto& pi : spec.projectors) p.push_back(std::max(0.0, (rho.matrix() * pi).trace().real()));
  return p;
}

CountVector expected_counts(const DensityMatrix& rho, const TomographySpec& spec) {
  CountVector c = born_probabilities(rho, spec);
  for (auto& v : c) v *= static_cast<double>(spec.counts_per_setting);
  return c;
}

CountVector simulate_counts(const DensityMatrix& rho, const TomographySpec& spec, std::uint64_t seed) {
  const std::vector<double> p = born_probabilities(rho, spec);
  CountVector counts(spec.size(), 0.0);
  std::mt19937_64 rng(seed);
  const double n = static_cast<double>(spec.counts_per_setting);
  for (const auto& g : spec.groups) {
    if (group_complete(spec, g)) {
      // Multinomial via sequential conditional binomials.
      std::uint64_t remaining = spec.counts_per_setting;
      double mass = 1.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        const std::size_t i = g[j];
        std::uint64_t draw = remaining;
        if (j + 1 < g.size()) {
          const double q = mass > 0.0 ? std::clamp(p[i] / mass, 0.0, 1.0) : 0.0;
          draw = std::binomial_distribution<std::uint64_t>(remaining, q)(rng);
        }
        counts[i] = static_cast<double>(draw);
        remaining -= draw;
        mass -= p[i];
      }
    } else {
      for (std::size_t i : g)
        counts[i] = p[i] > 0.0 ? static_cast<double>(std::poisson_distribution<std::uint64_t>(n * p[i])(rng)) : 0.0;
    }
  }
  return counts;
}

CMatrix linear_inversion(const CountVector& counts, const TomographySpec& spec) {
  if (counts.size() != spec.size()) throw DimensionError("count vector does not match the settings");
  if (gram_rank(spec) < 16) throw DomainError("tomography settings are not informationally complete");
  Eigen::VectorXd t(static_cast<Eigen::Index>(spec.size()));
  for (const auto& g : spec.groups) {
    double norm = 1.0;
    if (group_complete(spec, g)) {
      norm = 0.0;
      for (std::size_t i : g) norm += counts[i];
      if (norm <= 0.0) throw DomainError("a measurement basis recorded no counts");
    }
    for (std::size_t i : g) t(static_cast<Eigen::Index>(i)) = counts[i] / norm;
  }
  const Eigen::MatrixXd a = design_matrix(spec);
  const Eigen::VectorXd r = a.colPivHouseholderQr().solve(t);
  CMatrix m = from_parameters(r);
  const double tr = m.trace().real();
  if (!(tr > 0.0)) throw DomainError("linear inversion produced a non-positive trace");
  return m / tr;
}

DensityMatrix project_to_physical(const CMatrix& m) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  if (ev.sum() <= 0.0) throw DomainError("no positive part to project onto");
  ev /= ev.sum();
  return hermitized(es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint());
}

double log_likelihood(const DensityMatrix& rho, const CountVector& counts, const TomographySpec& spec) {
  const std::vector<double> p = born_probabilities(rho, spec);
  double ll = 0.0;
  for (const auto& g : spec.groups) {
    double pg = 0.0;
    for (std::size_t i : g) pg += p[i];
    for (std::size_t i : g)
      if (counts[i] > 0.0) ll += counts[i] * std::log(std::max(p[i], 1e-300) / pg);
  }
  return ll;
}

ReconstructionReport reconstruct(const CountVector& counts, const TomographySpec& spec,
                                 const StateVector& target) {
  DensityMatrix rho = project_to_physical(linear_inversion(counts, spec));
  if (rho.eigenvalues().minCoeff() < 1e-9)
    rho = DensityMatrix::mixture(1.0 - kStartMixing, rho, DensityMatrix::maximally_mixed(4));

  double total = 0.0;
  for (double c : counts) total += c;

  ReconstructionReport rep;
  double ll = log_likelihood(rho, counts, spec);
  rep.likelihood_trace.push_back(ll);
  const CMatrix eye = CMatrix::Identity(4, 4);
  double eps = 1.0;
  for (rep.iterations = 0; rep.iterations < kMaxIterations; ++rep.iterations) {
    const std::vector<double> p = born_probabilities(rho, spec);
    CMatrix grad = CMatrix::Zero(4, 4);
    for (const auto& g : spec.groups) {
      double pg = 0.0, ng = 0.0;
      CMatrix pig = CMatrix::Zero(4, 4);
      for (std::size_t i : g) {
        pg += p[i];
        ng += counts[i];
        pig += spec.projectors[i];
        if (counts[i] > 0.0) grad += (counts[i] / std::max(p[i], 1e-300)) * spec.projectors[i];
      }
      grad -= (ng / pg) * pig;
    }
    const CMatrix r = eye + grad / total;

    bool accepted = false;
    DensityMatrix candidate = rho;
    double ll_new = ll;
    for (int halving = 0; halving < 60; ++halving) {
      const CMatrix step = eye + eps * r;
      candidate = hermitized(step * rho.matrix() * step.adjoint());
      ll_new = log_likelihood(candidate, counts, spec);
      if (ll_new >= ll) {
        accepted = true;
        break;
      }
      eps *= 0.5;
    }
    if (!accepted) {
      rep.converged = true;
      break;
    }
    const double gain = ll_new - ll;
    rho = candidate;
    ll = ll_new;
    rep.likelihood_trace.push_back(ll);
    if (gain < kLikelihoodTol) {
      rep.converged = true;
      ++rep.iterations;
      break;
    }
    eps = std::min(2.0 * eps, 1e3);
  }

  rep.rho_hat = rho;
  rep.log_likelihood = ll;
  rep.fidelity_to_target = fidelity_pure(target, rho);
  rep.purity = purity(rho);
  return rep;
}

DensityMatrix observed_state(const DensityMatrix& rho, const Receiver& receiver, double theta) {
  const std::size_t d = receiver.bob_dim();
  if (rho.dim() != 2 * d) throw DimensionError("state dimension does not match the receiver's encoding");
  CMatrix v;
  if (receiver.encoding == Encoding::polarization) {
    v = rotation_operator(theta, OamSpace::gaussian()).matrix();
  } else {
    const OamSpace& sp = receiver.space;
    CMatrix embed = CMatrix::Zero(static_cast<Eigen::Index>(d), 2);
    embed.col(0) = photon_ket(ket_h(), 0, sp).amplitudes();
    embed.col(1) = photon_ket(ket_v(), 0, sp).amplitudes();
    v = rotation_operator(theta, sp).matrix() * qplate_operator(receiver.plate, sp).matrix().adjoint() * embed;
  }
  const CMatrix k = kron(CMatrix::Identity(2, 2), v);
  return hermitized(k.adjoint() * rho.matrix() * k);
}

}  // namespace vvs
