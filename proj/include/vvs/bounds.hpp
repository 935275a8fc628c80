// Loss-tolerant steering bounds C_n(xi).
//
// A cheating (local-hidden-state) Bob hands Alice a pure qubit with Bloch
// vector r and, per setting k, either announces a fixed answer +-1 or declares
// a null. Against uniformly chosen settings, a mixture of such strategies
// reaches conditional correlation E[payoff]/E[answered] while announcing a
// fraction E[answered]/n of the time. C_n(xi) is the best conditional
// correlation with announce fraction >= xi.
//
// With y_i = p_i / E[answered] (Charnes-Cooper) the problem becomes the LP
//   max sum_i y_i a_i  s.t.  sum_i y_i m_i = 1,  sum_i y_i <= 1/(n xi),  y >= 0
// over the finite strategy set, where a_i is the payoff and m_i the number of
// answered settings of strategy i.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vvs/qmath.hpp"
#include "vvs/steering.hpp"

namespace vvs {

struct CheatStrategy {
  BlochVector bloch;
  /// Per setting: +1, -1, or 0 for null.
  std::vector<int> answers;

  std::size_t answered() const;
  /// One character per setting: '+', '-' or '0'.
  std::string pattern() const;
};

struct StrategyPayoff {
  double payoff_sum = 0.0;
  std::size_t answered = 0;
};

/// payoff_sum = sum over answered k of answers_k (u_k . bloch).
/// Throws DomainError if every answer is null or the sizes disagree.
StrategyPayoff strategy_payoff(const CheatStrategy& s, const MeasurementSet& set);

/// All 3^n - 1 answer patterns, each with its payoff-maximizing Bloch vector
/// (direction of sum_k answers_k u_k; +z if that sum vanishes), sorted by
/// pattern.
std::vector<CheatStrategy> enumerate_strategies(const MeasurementSet& set);

/// C_n(1): max over sign patterns of |sum_k s_k u_k| / n.
double deterministic_bound(const MeasurementSet& set);

enum class AnnounceConstraint {
  average,      // E[answered]/n >= xi
  per_setting,  // P(answer setting k) >= xi for every k
};

struct WeightedStrategy {
  double weight = 0.0;
  CheatStrategy strategy;
};

struct BoundResult {
  double c = 0.0;
  /// Optimal mixture (weights sum to 1).
  std::vector<WeightedStrategy> witness;
};

/// Throws DomainError unless 0 < xi <= 1.
BoundResult loss_tolerant_bound(const MeasurementSet& set, double xi,
                                AnnounceConstraint mode = AnnounceConstraint::average);

/// Brute-force lower bound on C_n(xi): a latitude/longitude grid search (spacing
/// `sphere_resolution` radians, at most 1e-2) for every answer pattern, then an
/// exhaustive search over two-strategy mixtures on a weight grid that includes
/// the xi-feasibility boundary.
double bound_oracle(const MeasurementSet& set, double xi, double sphere_resolution = 1e-2);

struct BoundCurve {
  std::size_t n = 0;
  std::vector<double> xi_grid;
  std::vector<double> c_values;
  std::vector<std::vector<WeightedStrategy>> witnesses;
};

/// Requires a strictly increasing grid inside (0,1]; verifies c is non-increasing.
BoundCurve bound_curve(const MeasurementSet& set, const std::vector<double>& xi_grid,
                       AnnounceConstraint mode = AnnounceConstraint::average);

/// "p1:pattern1;p2:pattern2" with 12 significant digits.
std::string format_witness(const std::vector<WeightedStrategy>& witness);

}  // namespace vvs
