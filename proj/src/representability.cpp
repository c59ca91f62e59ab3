#include "choiceapprox/representability.hpp"

#include <algorithm>
#include <cmath>

#include "choiceapprox/error.hpp"
#include "choiceapprox/features.hpp"
#include "choiceapprox/lp.hpp"
#include "parallel.hpp"

namespace choiceapprox {

namespace {

// Feature rows in decreasing rank order with each column divided by its
// max-abs over X. Positive column scaling does not change which strict
// orderings are achievable.
struct ScaledChain {
  std::vector<Point> rows;
  std::vector<double> scale;
};

ScaledChain scaled_chain(const Ranking& ranking, int degree, const ChoiceSpace& space) {
  if (ranking.size() != space.size()) throw UsageError("ranking does not match the space");
  const FeatureMap map(degree, space.k());
  const auto feats = map.evaluate(space);
  ScaledChain chain;
  chain.scale.assign(map.dimension(), 0.0);
  for (const auto& f : feats)
    for (std::size_t j = 0; j < f.size(); ++j) chain.scale[j] = std::max(chain.scale[j], std::abs(f[j]));
  for (auto& s : chain.scale)
    if (s == 0.0) s = 1.0;
  for (std::size_t x : ranking.order()) {
    Point row = feats[x];
    for (std::size_t j = 0; j < row.size(); ++j) row[j] /= chain.scale[j];
    chain.rows.push_back(std::move(row));
  }
  return chain;
}

}  // namespace

RepresentabilityResult is_representable(const Ranking& ranking, int degree, const ChoiceSpace& space) {
  if (!space.has_all_pairs())
    throw UsageError("representability needs every pair of alternatives as a menu");
  const auto chain = scaled_chain(ranking, degree, space);
  const std::size_t n = chain.rows.size();
  const std::size_t dim = chain.scale.size();

  RepresentabilityResult result;
  if (n == 1) {
    result.representable = true;
    result.beta.assign(dim, 0.0);
    result.margin = 1.0;
    return result;
  }

  // Variables: b_j = beta_j + 1 in [0, 2], then m = m_plus - m_minus.
  // maximize m  s.t.  (p_i - p_{i+1}) . beta >= m,  |beta_j| <= 1.
  lp::Problem prob;
  prob.maximize = true;
  prob.objective.assign(dim + 2, 0.0);
  prob.objective[dim] = 1.0;
  prob.objective[dim + 1] = -1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    lp::Constraint row{std::vector<double>(dim + 2, 0.0), lp::Sense::GreaterEqual, 0.0};
    for (std::size_t j = 0; j < dim; ++j) {
      const double delta = chain.rows[i][j] - chain.rows[i + 1][j];
      row.coeffs[j] = delta;
      row.rhs += delta;
    }
    row.coeffs[dim] = -1.0;
    row.coeffs[dim + 1] = 1.0;
    prob.rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < dim; ++j) {
    lp::Constraint box{std::vector<double>(dim + 2, 0.0), lp::Sense::LessEqual, 2.0};
    box.coeffs[j] = 1.0;
    prob.rows.push_back(std::move(box));
  }
  const auto sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal)
    throw NumericError("representability LP did not reach an optimum");

  result.margin = sol.objective;
  result.representable = sol.objective > kRepresentabilityMargin;
  if (result.representable) {
    std::vector<double> beta(dim);
    for (std::size_t j = 0; j < dim; ++j) beta[j] = (sol.x[j] - 1.0) / chain.scale[j];
    // Rescale so the smallest raw consecutive gap is exactly 1.
    const FeatureMap map(degree, space.k());
    const auto feats = map.evaluate(space);
    double min_gap = INFINITY;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      double gap = 0.0;
      for (std::size_t j = 0; j < dim; ++j)
        gap += beta[j] * (feats[ranking.order()[i]][j] - feats[ranking.order()[i + 1]][j]);
      min_gap = std::min(min_gap, gap);
    }
    if (!(min_gap > 0.0)) throw NumericError("representability witness lost its margin");
    for (auto& b : beta) b /= min_gap;
    result.beta = std::move(beta);
  } else {
    // Multipliers of the ordering rows; at m = 0 they solve the Farkas alternative.
    std::vector<double> lambda(n - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      lambda[i] = std::max(0.0, -sol.duals[i]);
      sum += lambda[i];
    }
    if (!(sum > 0.0)) throw NumericError("representability LP returned no dual certificate");
    for (auto& l : lambda) l /= sum;
    result.dual_certificate = std::move(lambda);
  }
  return result;
}

Census census(int degree, const ChoiceSpace& space, std::size_t jobs) {
  const auto rankings = enumerate_rankings(space);
  std::vector<char> verdict(rankings.size(), 0);
  detail::parallel_for(rankings.size(), jobs, [&](std::size_t i) {
    verdict[i] = is_representable(rankings[i], degree, space).representable ? 1 : 0;
  });
  Census out;
  for (std::size_t i = 0; i < rankings.size(); ++i)
    (verdict[i] ? out.representable : out.unrepresentable).push_back(rankings[i]);
  return out;
}

bool condition_star_oracle(const Ranking& ranking, int degree, const ChoiceSpace& space) {
  if (!space.has_all_pairs())
    throw UsageError("representability needs every pair of alternatives as a menu");
  const auto chain = scaled_chain(ranking, degree, space);
  const std::size_t n = chain.rows.size();
  if (n == 1) return true;
  const std::size_t dim = chain.scale.size();

  // lambda_1 p(best) + sum_{i>=2} (lambda_i - lambda_{i-1}) p(x_i) - lambda_{n-1} p(worst) = 0,
  // lambda >= 0, sum lambda = 1.
  lp::Problem prob;
  prob.objective.assign(n - 1, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    lp::Constraint row{std::vector<double>(n - 1, 0.0), lp::Sense::Equal, 0.0};
    for (std::size_t pos = 0; pos < n; ++pos) {
      // coefficient of p(x_pos) is lambda_pos - lambda_{pos-1} (0-based, out of range = 0)
      if (pos < n - 1) row.coeffs[pos] += chain.rows[pos][j];
      if (pos >= 1) row.coeffs[pos - 1] -= chain.rows[pos][j];
    }
    prob.rows.push_back(std::move(row));
  }
  prob.rows.push_back({std::vector<double>(n - 1, 1.0), lp::Sense::Equal, 1.0});
  lp::Options opt;
  opt.feasibility_tolerance = kConditionStarTolerance;
  const auto sol = lp::solve(prob, opt);
  if (sol.status == lp::Status::IterationLimit) throw NumericError("Farkas-alternative LP hit its iteration limit");
  return sol.status == lp::Status::Infeasible;
}

double condition_star_residual(const Ranking& ranking, int degree, const ChoiceSpace& space,
                               const std::vector<double>& lambda) {
  const auto chain = scaled_chain(ranking, degree, space);
  const std::size_t n = chain.rows.size();
  if (lambda.size() + 1 != n) throw UsageError("multiplier count must be |X| - 1");
  double worst = 0.0;
  for (std::size_t j = 0; j < chain.scale.size(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) acc += lambda[i] * (chain.rows[i][j] - chain.rows[i + 1][j]);
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

}  // namespace choiceapprox
