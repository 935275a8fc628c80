// Dense two-phase simplex for small linear programs (Bland's rule).
#pragma once

#include <cstddef>
#include <vector>

namespace vvs {

enum class RowSense { le, eq, ge };

struct LpRow {
  std::vector<double> coeffs;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

/// maximize objective . x  subject to rows, x >= 0.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LpRow> rows;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  std::vector<double> x;
  /// Structural variables in the final basis, ascending.
  std::vector<std::size_t> basic;
};

LpSolution solve_lp(const LinearProgram& lp);

}  // namespace vvs
