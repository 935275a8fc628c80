#include "vvs/steering.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace vvs {

namespace {

constexpr double kDirectionTol = 1e-9;

bool same_direction(const BlochVector& a, const BlochVector& b) {
  return std::abs(a.dot(b) - 1.0) < kDirectionTol;
}

}  // namespace

MeasurementSet::MeasurementSet(std::vector<BlochVector> directions) : dirs_(std::move(directions)) {
  if (dirs_.size() < 2) throw DomainError("a measurement set needs at least two settings");
  for (const auto& u : dirs_)
    if (!u.is_unit()) throw DomainError("measurement directions must be unit vectors");
  for (std::size_t i = 0; i < dirs_.size(); ++i)
    for (std::size_t j = i + 1; j < dirs_.size(); ++j)
      if (same_direction(dirs_[i], dirs_[j]) || same_direction(dirs_[i], -dirs_[j]))
        throw DomainError("measurement directions must be pairwise distinct and non-antipodal");
}

MeasurementSet platonic_set(int n) {
  const BlochVector x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1};
  switch (n) {
    case 2:
      return MeasurementSet({z, x});
    case 3:
      return MeasurementSet({z, x, y});
    case 4: {
      const double third = 1.0 / 3.0;
      const double r = std::sqrt(8.0) / 3.0;
      std::vector<BlochVector> d{z};
      for (int j = 0; j < 3; ++j) {
        const double phi = 2.0 * M_PI * j / 3.0;
        d.push_back(BlochVector{r * std::cos(phi), r * std::sin(phi), -third}.normalized());
      }
      return MeasurementSet(std::move(d));
    }
    case 6: {
      // One vertex from each antipodal pair of the icosahedron.
      const double h = 1.0 / std::sqrt(5.0);
      const double r = 2.0 / std::sqrt(5.0);
      std::vector<BlochVector> d{z};
      for (int j = 0; j < 5; ++j) {
        const double phi = 2.0 * M_PI * j / 5.0;
        d.push_back(BlochVector{r * std::cos(phi), r * std::sin(phi), h}.normalized());
      }
      return MeasurementSet(std::move(d));
    }
    default:
      throw DomainError("unsupported number of settings " + std::to_string(n) +
                        " (supported: 2, 3, 4, 6)");
  }
}

std::size_t Receiver::bob_dim() const {
  return encoding == Encoding::polarization ? 2 : photon_dim(space);
}

CMatrix Receiver::analyzer(const BlochVector& u, double theta, int outcome) const {
  if (encoding == Encoding::polarization) return bob_polarization_analyzer(u, theta, outcome).matrix();
  return bob_analyzer(u, theta, outcome, space, plate).matrix();
}

CMatrix Receiver::null_projector(double theta) const {
  if (encoding == Encoding::polarization) return CMatrix::Zero(2, 2);
  return bob_null_projector(theta, space, plate).matrix();
}

SteeringEstimate steering_parameter_exact(const DensityMatrix& rho, const MeasurementSet& set,
                                          const Receiver& receiver, double theta) {
  if (rho.dim() != 2 * receiver.bob_dim())
    throw DimensionError("state dimension does not match the receiver's encoding");
  SteeringEstimate est;
  est.per_setting_correlations.reserve(set.size());
  double announce_sum = 0.0;
  for (std::size_t k = 0; k < set.size(); ++k) {
    double weight = 0.0;
    double corr = 0.0;
    for (int a : {1, -1}) {
      const CMatrix pa = polarization_projector(set[k], a).matrix();
      for (int b : {1, -1}) {
        const CMatrix joint = kron(pa, receiver.analyzer(set[k], theta, b));
        const double p = (rho.matrix() * joint).trace().real();
        weight += p;
        corr += static_cast<double>(a * -b) * p;
      }
    }
    if (weight <= 0.0) throw DomainError("setting " + std::to_string(k) + " is never announced");
    est.per_setting_correlations.push_back(corr / weight);
    announce_sum += weight;
  }
  const double n = static_cast<double>(set.size());
  est.s_value = std::accumulate(est.per_setting_correlations.begin(),
                                est.per_setting_correlations.end(), 0.0) / n;
  est.announce_fraction = announce_sum / n;
  return est;
}

void SettingTally::add(int alice_outcome, int bob_outcome_or_zero, std::uint64_t times) {
  if (alice_outcome != 1 && alice_outcome != -1) throw DomainError("alice outcome must be +-1");
  const std::size_t a = alice_outcome == 1 ? 0 : 1;
  std::size_t b = 2;
  if (bob_outcome_or_zero == 1)
    b = 0;
  else if (bob_outcome_or_zero == -1)
    b = 1;
  else if (bob_outcome_or_zero != 0)
    throw DomainError("bob outcome must be +-1 or 0 (null)");
  counts[a][b] += times;
}

std::uint64_t SettingTally::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts)
    for (auto c : row) t += c;
  return t;
}

std::uint64_t SettingTally::announced() const {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

std::uint64_t SettingTally::agree() const { return counts[0][1] + counts[1][0]; }

SettingTally& SettingTally::operator+=(const SettingTally& o) {
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 3; ++b) counts[a][b] += o.counts[a][b];
  return *this;
}

SteeringEstimate steering_parameter_counts(const CountTable& counts) {
  if (counts.empty()) throw DomainError("empty count table");
  SteeringEstimate est;
  double var_sum = 0.0;
  std::uint64_t announced_total = 0, trials_total = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const SettingTally& t = counts[k];
    const std::uint64_t m = t.announced();
    if (m == 0) throw DomainError("setting " + std::to_string(k) + " has no announced events");
    const double c = (static_cast<double>(t.agree()) - static_cast<double>(t.disagree())) /
                     static_cast<double>(m);
    est.per_setting_correlations.push_back(c);
    var_sum += (1.0 - c * c) / static_cast<double>(m);
    announced_total += m;
    trials_total += t.total();
  }
  const double n = static_cast<double>(counts.size());
  est.s_value = std::accumulate(est.per_setting_correlations.begin(),
                                est.per_setting_correlations.end(), 0.0) / n;
  est.std_err = std::sqrt(var_sum) / n;
  est.announce_fraction = static_cast<double>(announced_total) / static_cast<double>(trials_total);
  return est;
}

}  // namespace vvs
