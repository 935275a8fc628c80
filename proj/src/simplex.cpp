#include "vvs/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace vvs {

namespace {

constexpr double kPivotTol = 1e-12;
constexpr double kFeasTol = 1e-9;

struct Tableau {
  Eigen::MatrixXd t;               // m rows, ncols + 1 (rhs last)
  std::vector<std::size_t> basis;  // column basic in each row

  Eigen::Index rhs() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    basis[static_cast<std::size_t>(r)] = static_cast<std::size_t>(c);
  }

  // Maximizes cost . x over columns with allowed[j]. Returns false if unbounded.
  bool optimize(const std::vector<double>& cost, const std::vector<bool>& allowed) {
    const Eigen::Index m = t.rows();
    for (int guard = 0; guard < 100000; ++guard) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < rhs(); ++j) {
        if (!allowed[static_cast<std::size_t>(j)]) continue;
        double reduced = cost[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < m; ++i) reduced -= cost[basis[static_cast<std::size_t>(i)]] * t(i, j);
        if (reduced > kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (t(i, enter) <= kPivotTol) continue;
        const double ratio = t(i, rhs()) / t(i, enter);
        if (ratio < best - kPivotTol ||
            (std::abs(ratio - best) <= kPivotTol && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit reached");
  }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  const std::size_t m = lp.rows.size();
  for (const auto& row : lp.rows)
    if (row.coeffs.size() != n) throw std::invalid_argument("LP row length mismatch");

  // Normalize to nonnegative right-hand sides.
  std::vector<LpRow> rows = lp.rows;
  for (auto& row : rows)
    if (row.rhs < 0.0) {
      for (auto& c : row.coeffs) c = -c;
      row.rhs = -row.rhs;
      if (row.sense == RowSense::le)
        row.sense = RowSense::ge;
      else if (row.sense == RowSense::ge)
        row.sense = RowSense::le;
    }

  std::size_t n_slack = 0, n_art = 0;
  for (const auto& row : rows) {
    if (row.sense != RowSense::eq) ++n_slack;
    if (row.sense != RowSense::le) ++n_art;
  }
  const std::size_t ncols = n + n_slack + n_art;
  Tableau tab{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(ncols + 1)),
              std::vector<std::size_t>(m)};
  std::vector<bool> is_art(ncols, false);
  std::size_t slack = n, art = n + n_slack;
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < n; ++j) tab.t(r, static_cast<Eigen::Index>(j)) = rows[i].coeffs[j];
    tab.t(r, tab.rhs()) = rows[i].rhs;
    switch (rows[i].sense) {
      case RowSense::le:
        tab.t(r, static_cast<Eigen::Index>(slack)) = 1.0;
        tab.basis[i] = slack++;
        break;
      case RowSense::ge:
        tab.t(r, static_cast<Eigen::Index>(slack++)) = -1.0;
        [[fallthrough]];
      case RowSense::eq:
        tab.t(r, static_cast<Eigen::Index>(art)) = 1.0;
        is_art[art] = true;
        tab.basis[i] = art++;
        break;
    }
  }

  LpSolution sol;
  // Phase 1: drive artificials to zero.
  if (n_art > 0) {
    std::vector<double> cost(ncols, 0.0);
    for (std::size_t j = 0; j < ncols; ++j)
      if (is_art[j]) cost[j] = -1.0;
    tab.optimize(cost, std::vector<bool>(ncols, true));
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (is_art[tab.basis[i]]) infeas += tab.t(static_cast<Eigen::Index>(i), tab.rhs());
    if (infeas > kFeasTol) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_art[tab.basis[i]]) continue;
      for (std::size_t j = 0; j < ncols; ++j)
        if (!is_art[j] && std::abs(tab.t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > kPivotTol) {
          tab.pivot(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          break;
        }
    }
  }

  std::vector<double> cost(ncols, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective[j];
  std::vector<bool> allowed(ncols);
  for (std::size_t j = 0; j < ncols; ++j) allowed[j] = !is_art[j];
  if (!tab.optimize(cost, allowed)) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  sol.status = LpStatus::optimal;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] < n) {
      sol.x[tab.basis[i]] = tab.t(static_cast<Eigen::Index>(i), tab.rhs());
      sol.basic.push_back(tab.basis[i]);
    }
  std::sort(sol.basic.begin(), sol.basic.end());
  for (std::size_t j = 0; j < n; ++j) sol.value += lp.objective[j] * sol.x[j];
  return sol;
}

}  // namespace vvs
