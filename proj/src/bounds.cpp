#include "vvs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vvs/kernels.hpp"
#include "vvs/simplex.hpp"

namespace vvs {

namespace {

constexpr double kTieTol = 1e-10;
constexpr double kMonotoneTol = 1e-9;

void check_xi(double xi) {
  if (!(xi > 0.0 && xi <= 1.0)) throw DomainError("announce fraction xi must lie in (0, 1]");
}

BlochVector signed_sum(const std::vector<int>& answers, const MeasurementSet& set) {
  BlochVector v{};
  for (std::size_t k = 0; k < set.size(); ++k) v = v + set[k] * static_cast<double>(answers[k]);
  return v;
}

struct Column {
  double payoff;
  std::size_t answered;
};

// Value of the vertex supported on {i} or {i, j}; NaN if not a feasible vertex.
double vertex_value(const Column& a, const Column* b, double cap) {
  if (b == nullptr) {
    const double y = 1.0 / static_cast<double>(a.answered);
    return y <= cap * (1.0 + 1e-12) ? a.payoff * y : std::numeric_limits<double>::quiet_NaN();
  }
  const double mi = static_cast<double>(a.answered), mj = static_cast<double>(b->answered);
  if (mi == mj) return std::numeric_limits<double>::quiet_NaN();
  // y_i + y_j = cap, mi y_i + mj y_j = 1.
  const double yj = (1.0 - mi * cap) / (mj - mi);
  const double yi = cap - yj;
  if (yi <= 0.0 || yj <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return a.payoff * yi + b->payoff * yj;
}

constexpr double kWeightFloor = 1e-12;

std::vector<WeightedStrategy> mixture_from(const std::vector<CheatStrategy>& strategies,
                                           const std::vector<std::pair<std::size_t, double>>& y) {
  double total = 0.0;
  for (const auto& [i, w] : y) total += w;
  std::vector<WeightedStrategy> mix;
  for (const auto& [i, w] : y)
    if (w / total > kWeightFloor) mix.push_back({w / total, strategies[i]});
  double kept = 0.0;
  for (const auto& m : mix) kept += m.weight;
  for (auto& m : mix) m.weight /= kept;
  return mix;
}

}  // namespace

std::size_t CheatStrategy::answered() const {
  return static_cast<std::size_t>(std::count_if(answers.begin(), answers.end(), [](int a) { return a != 0; }));
}

std::string CheatStrategy::pattern() const {
  std::string s;
  s.reserve(answers.size());
  for (int a : answers) s.push_back(a > 0 ? '+' : (a < 0 ? '-' : '0'));
  return s;
}

StrategyPayoff strategy_payoff(const CheatStrategy& s, const MeasurementSet& set) {
  if (s.answers.size() != set.size()) throw DimensionError("strategy and measurement set sizes differ");
  if (!s.bloch.is_unit(1e-9)) throw DomainError("strategy Bloch vector must be a unit vector");
  StrategyPayoff out;
  for (std::size_t k = 0; k < set.size(); ++k) {
    const int a = s.answers[k];
    if (a == 0) continue;
    if (a != 1 && a != -1) throw DomainError("strategy answers must be +1, -1 or 0");
    out.payoff_sum += a * set[k].dot(s.bloch);
    ++out.answered;
  }
  if (out.answered == 0) throw DomainError("a strategy must answer at least one setting");
  return out;
}

std::vector<CheatStrategy> enumerate_strategies(const MeasurementSet& set) {
  const std::size_t n = set.size();
  std::size_t count = 1;
  for (std::size_t k = 0; k < n; ++k) count *= 3;
  std::vector<CheatStrategy> out;
  out.reserve(count - 1);
  // Digit order 0,1,2 = '+','-','0' with the first setting most significant,
  // so enumeration order is the lexicographic pattern order.
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<int> answers(n);
    std::size_t c = code;
    for (std::size_t k = n; k-- > 0;) {
      const std::size_t digit = c % 3;
      c /= 3;
      answers[k] = digit == 0 ? 1 : (digit == 1 ? -1 : 0);
    }
    if (std::all_of(answers.begin(), answers.end(), [](int a) { return a == 0; })) continue;
    const BlochVector v = signed_sum(answers, set);
    const BlochVector bloch = v.norm() > 1e-12 ? v.normalized() : BlochVector{0, 0, 1};
    out.push_back({bloch, std::move(answers)});
  }
  return out;
}

double deterministic_bound(const MeasurementSet& set) {
  const std::size_t n = set.size();
  double best = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<int> signs(n);
    for (std::size_t k = 0; k < n; ++k) signs[k] = (mask >> k) & 1 ? -1 : 1;
    best = std::max(best, signed_sum(signs, set).norm());
  }
  return best / static_cast<double>(n);
}

BoundResult loss_tolerant_bound(const MeasurementSet& set, double xi, AnnounceConstraint mode) {
  check_xi(xi);
  const std::size_t n = set.size();
  const auto strategies = enumerate_strategies(set);
  std::vector<Column> cols;
  cols.reserve(strategies.size());
  for (const auto& s : strategies) {
    const auto p = strategy_payoff(s, set);
    cols.push_back({p.payoff_sum, p.answered});
  }

  const double cap = 1.0 / (static_cast<double>(n) * xi);
  LinearProgram lp;
  lp.objective.reserve(cols.size());
  LpRow norm_row{{}, RowSense::eq, 1.0};
  LpRow cap_row{{}, RowSense::le, cap};
  for (const auto& c : cols) {
    lp.objective.push_back(c.payoff);
    norm_row.coeffs.push_back(static_cast<double>(c.answered));
    cap_row.coeffs.push_back(1.0);
  }
  lp.rows.push_back(std::move(norm_row));
  if (mode == AnnounceConstraint::average) {
    lp.rows.push_back(std::move(cap_row));
  } else {
    // P(answer k) >= xi  <=>  sum_i y_i ([k answered by i] - xi) >= 0.
    for (std::size_t k = 0; k < n; ++k) {
      LpRow row{{}, RowSense::ge, 0.0};
      for (const auto& s : strategies) row.coeffs.push_back((s.answers[k] != 0 ? 1.0 : 0.0) - xi);
      lp.rows.push_back(std::move(row));
    }
  }

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) throw std::runtime_error("bound LP did not reach an optimum");

  BoundResult result;
  result.c = sol.value;
  if (mode == AnnounceConstraint::per_setting) {
    std::vector<std::pair<std::size_t, double>> y;
    for (std::size_t i : sol.basic) y.emplace_back(i, sol.x[i]);
    result.witness = mixture_from(strategies, y);
    return result;
  }

  // Lexicographically first vertex attaining the optimum.
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const double single = vertex_value(cols[i], nullptr, cap);
    if (!std::isnan(single) && single >= sol.value - kTieTol) {
      result.c = single;
      result.witness = {{1.0, strategies[i]}};
      return result;
    }
    for (std::size_t j = i + 1; j < cols.size(); ++j) {
      const double v = vertex_value(cols[i], &cols[j], cap);
      if (std::isnan(v) || v < sol.value - kTieTol) continue;
      const double mi = static_cast<double>(cols[i].answered), mj = static_cast<double>(cols[j].answered);
      const double yj = (1.0 - mi * cap) / (mj - mi);
      result.c = v;
      result.witness = mixture_from(strategies, {{i, cap - yj}, {j, yj}});
      return result;
    }
  }
  // Unreachable for a bounded two-row LP; keep the simplex basis.
  std::vector<std::pair<std::size_t, double>> y;
  for (std::size_t i : sol.basic) y.emplace_back(i, sol.x[i]);
  result.witness = mixture_from(strategies, y);
  return result;
}

double bound_oracle(const MeasurementSet& set, double xi, double sphere_resolution) {
  check_xi(xi);
  if (!(sphere_resolution > 0.0 && sphere_resolution <= 1e-2))
    throw DomainError("oracle sphere resolution must lie in (0, 1e-2]");
  const auto strategies = enumerate_strategies(set);
  std::vector<BlochVector> directions;
  directions.reserve(strategies.size());
  for (const auto& s : strategies) directions.push_back(signed_sum(s.answers, set));
  const auto grid = kernels::sphere_grid(sphere_resolution);
  const std::vector<double> payoff = kernels::sphere_search_parallel(directions, grid);

  const double n = static_cast<double>(set.size());
  const double floor = n * xi;  // required E[answered]
  constexpr int kWeightSteps = 2000;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    const double mi = static_cast<double>(strategies[i].answered());
    if (mi >= floor - 1e-12) best = std::max(best, payoff[i] / mi);
    for (std::size_t j = i + 1; j < strategies.size(); ++j) {
      const double mj = static_cast<double>(strategies[j].answered());
      auto consider = [&](double w) {
        if (w < 0.0 || w > 1.0) return;
        const double m = w * mi + (1.0 - w) * mj;
        if (m < floor - 1e-12) return;
        best = std::max(best, (w * payoff[i] + (1.0 - w) * payoff[j]) / m);
      };
      for (int s = 0; s <= kWeightSteps; ++s) consider(static_cast<double>(s) / kWeightSteps);
      if (mi != mj) consider((floor - mj) / (mi - mj));
    }
  }
  return best;
}

BoundCurve bound_curve(const MeasurementSet& set, const std::vector<double>& xi_grid,
                       AnnounceConstraint mode) {
  for (std::size_t i = 0; i < xi_grid.size(); ++i) {
    check_xi(xi_grid[i]);
    if (i > 0 && !(xi_grid[i] > xi_grid[i - 1])) throw DomainError("xi grid must be strictly increasing");
  }
  BoundCurve curve;
  curve.n = set.size();
  curve.xi_grid = xi_grid;
  for (auto& r : kernels::bound_grid_parallel(set, xi_grid, mode)) {
    curve.c_values.push_back(r.c);
    curve.witnesses.push_back(std::move(r.witness));
  }
  for (std::size_t i = 1; i < curve.c_values.size(); ++i)
    if (curve.c_values[i] > curve.c_values[i - 1] + kMonotoneTol)
      throw std::logic_error("bound curve is not non-increasing in xi");
  return curve;
}

std::string format_witness(const std::vector<WeightedStrategy>& witness) {
  std::string out;
  for (const auto& w : witness) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", w.weight);
    if (!out.empty()) out += ';';
    out += buf;
    out += ':';
    out += w.strategy.pattern();
  }
  return out;
}

}  // namespace vvs
