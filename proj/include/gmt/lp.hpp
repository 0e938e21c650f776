#pragma once

// Self-contained bounded-variable primal simplex.
//
//   minimize  c^T x   subject to  A x = b,  0 <= x_j <= u_j  (u_j may be +inf)
//
// The basis inverse is kept as a dense matrix with rank-one updates and is
// refactored periodically; columns are stored sparse. Rows whose right-hand
// side is covered by a single-entry column start from that column ("crash"
// basis); the remaining rows get artificial variables and a phase-one pass.

#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace gmt {

struct LpColumn {
  std::vector<std::pair<int, double>> entries;  // (row, coefficient)
  double cost = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

struct LpProblem {
  int rows = 0;
  std::vector<double> rhs;
  std::vector<LpColumn> columns;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  double objective = 0.0;
  std::vector<double> x;      // one value per column
  std::vector<double> duals;  // one value per row: y with c_j - y^T A_j >= 0 at lower bounds
  int iterations = 0;
};

struct SimplexOptions {
  double optimality_tolerance = 1e-11;
  double pivot_tolerance = 1e-11;
  double feasibility_tolerance = 1e-9;
  int max_iterations = 1'000'000;
  int refactor_interval = 512;
  // Consecutive degenerate pivots tolerated before switching to Bland's rule.
  int degenerate_streak_limit = 40;
};

LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options = {});

}  // namespace gmt
