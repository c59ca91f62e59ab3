#include "choiceapprox/lp.hpp"

#include <cmath>
#include <limits>

#include "choiceapprox/error.hpp"

namespace choiceapprox::lp {

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }

  void pivot(std::size_t p, std::size_t q) {
    const double inv = 1.0 / at(p, q);
    for (std::size_t c = 0; c <= cols_; ++c) at(p, c) *= inv;
    at(p, q) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == p) continue;
      const double f = at(r, q);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(p, c);
      at(r, q) = 0.0;
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  const std::size_t n = problem.objective.size();
  const std::size_t m = problem.rows.size();
  for (const auto& row : problem.rows)
    if (row.coeffs.size() != n) throw UsageError("LP row length does not match the objective");

  // Column layout: originals, then one slack/surplus per inequality, then one
  // artificial per >= or = row.
  std::vector<bool> flipped(m, false);
  std::vector<Sense> sense(m);
  std::size_t n_slack = 0, n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sense[i] = problem.rows[i].sense;
    if (problem.rows[i].rhs < 0.0) {
      flipped[i] = true;
      if (sense[i] == Sense::LessEqual)
        sense[i] = Sense::GreaterEqual;
      else if (sense[i] == Sense::GreaterEqual)
        sense[i] = Sense::LessEqual;
    }
    if (sense[i] != Sense::Equal) ++n_slack;
    if (sense[i] != Sense::LessEqual) ++n_art;
  }
  const std::size_t art_begin = n + n_slack;
  const std::size_t cols = art_begin + n_art;

  Tableau tab(m, cols);
  std::vector<std::size_t> basis(m);
  std::vector<std::size_t> identity_col(m);
  std::size_t next_slack = n, next_art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = flipped[i] ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = sign * problem.rows[i].coeffs[j];
    tab.rhs(i) = sign * problem.rows[i].rhs;
    if (sense[i] == Sense::LessEqual) {
      tab.at(i, next_slack) = 1.0;
      basis[i] = identity_col[i] = next_slack++;
    } else {
      if (sense[i] == Sense::GreaterEqual) tab.at(i, next_slack++) = -1.0;
      tab.at(i, next_art) = 1.0;
      basis[i] = identity_col[i] = next_art++;
    }
  }

  const double tol = options.pivot_tolerance;
  std::size_t iterations = 0;

  // Runs simplex on the current objective row; returns false when unbounded.
  auto run = [&](bool allow_artificial) -> Status {
    while (true) {
      if (++iterations > options.max_iterations) return Status::IterationLimit;
      std::size_t q = cols;
      const std::size_t limit = allow_artificial ? cols : art_begin;
      for (std::size_t j = 0; j < limit; ++j)
        if (tab.cost(j) < -tol) {
          q = j;
          break;
        }
      if (q == cols) return Status::Optimal;
      std::size_t p = m;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        const double a = tab.at(i, q);
        if (a <= tol) continue;
        const double ratio = tab.rhs(i) / a;
        if (ratio < best_ratio - 1e-15 || (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[p])) {
          best_ratio = ratio;
          p = i;
        }
      }
      if (p == m) return Status::Unbounded;
      tab.pivot(p, q);
      basis[p] = q;
    }
  };

  Solution sol;
  double rhs_scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) rhs_scale = std::max(rhs_scale, std::abs(tab.rhs(i)));

  // Phase one: minimize the sum of artificials.
  if (n_art > 0) {
    for (std::size_t j = 0; j <= cols; ++j) tab.cost(j) = 0.0;
    for (std::size_t j = art_begin; j < cols; ++j) tab.cost(j) = 1.0;
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] >= art_begin)
        for (std::size_t j = 0; j <= cols; ++j) tab.cost(j) -= tab.at(i, j);
    const Status st = run(true);
    if (st == Status::IterationLimit) {
      sol.status = st;
      return sol;
    }
    sol.infeasibility = -tab.cost(cols);
    if (sol.infeasibility > options.feasibility_tolerance * rhs_scale) {
      sol.status = Status::Infeasible;
      return sol;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < art_begin) continue;
      for (std::size_t j = 0; j < art_begin; ++j)
        if (std::abs(tab.at(i, j)) > 1e-9) {
          tab.pivot(i, j);
          basis[i] = j;
          break;
        }
    }
  }

  // Phase two, always as a minimization.
  std::vector<double> c(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) c[j] = problem.maximize ? -problem.objective[j] : problem.objective[j];
  for (std::size_t j = 0; j < cols; ++j) tab.cost(j) = c[j];
  tab.cost(cols) = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double cb = c[basis[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= cols; ++j) tab.cost(j) -= cb * tab.at(i, j);
  }
  sol.status = run(false);
  if (sol.status != Status::Optimal) return sol;

  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) sol.x[basis[i]] = tab.rhs(i);
  const double z = -tab.cost(cols);
  sol.objective = problem.maximize ? -z : z;
  sol.duals.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double y = -tab.cost(identity_col[i]);
    if (flipped[i]) y = -y;
    sol.duals[i] = problem.maximize ? -y : y;
  }
  return sol;
}

}  // namespace choiceapprox::lp
