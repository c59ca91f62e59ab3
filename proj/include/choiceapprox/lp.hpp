#pragma once

#include <cstddef>
#include <vector>

namespace choiceapprox::lp {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Constraint {
  std::vector<double> coeffs;
  Sense sense;
  double rhs;
};

/// Optimize objective . x subject to the rows, with every variable x >= 0.
struct Problem {
  std::vector<double> objective;
  bool maximize = false;
  std::vector<Constraint> rows;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// Shadow prices d(objective)/d(rhs_i) at the optimum.
  std::vector<double> duals;
  /// Phase-one residual (sum of artificials); 0 for a feasible problem.
  double infeasibility = 0.0;
};

struct Options {
  double pivot_tolerance = 1e-11;
  double feasibility_tolerance = 1e-9;
  std::size_t max_iterations = 20000;
};

/// Dense two-phase tableau simplex with Bland's rule. Deterministic; meant for
/// the small problems in this library (tens of rows and columns).
Solution solve(const Problem& problem, const Options& options = {});

}  // namespace choiceapprox::lp
