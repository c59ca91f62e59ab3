#include "choiceapprox/features.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "choiceapprox/error.hpp"
#include "choiceapprox/lp.hpp"

namespace choiceapprox {

FeatureMap::FeatureMap(int degree, std::size_t k) : degree_(degree), k_(k) {
  if (degree < 1) throw UsageError("degree must be at least 1");
  if (k == 0) throw UsageError("feature map needs at least one characteristic");
  for (int grade = 1; grade <= degree; ++grade) {
    // Descending lexicographic enumeration of tuples summing to `grade`.
    std::vector<int> e(k, 0);
    std::function<void(std::size_t, int)> fill = [&](std::size_t pos, int remaining) {
      if (pos + 1 == k) {
        e[pos] = remaining;
        exponents_.push_back(e);
        return;
      }
      for (int v = remaining; v >= 0; --v) {
        e[pos] = v;
        fill(pos + 1, remaining - v);
      }
    };
    fill(0, grade);
  }
}

Point FeatureMap::operator()(std::span<const double> x) const {
  if (x.size() != k_) throw UsageError("characteristic vector has the wrong length");
  Point out;
  out.reserve(exponents_.size());
  for (const auto& e : exponents_) {
    double v = 1.0;
    for (std::size_t l = 0; l < k_; ++l)
      for (int p = 0; p < e[l]; ++p) v *= x[l];
    out.push_back(v);
  }
  return out;
}

std::vector<Point> FeatureMap::evaluate(const ChoiceSpace& space) const {
  std::vector<Point> rows;
  rows.reserve(space.size());
  for (const auto& alt : space.alternatives()) rows.push_back((*this)(alt.chars));
  return rows;
}

Point monomial_features(std::span<const double> x, int degree) { return FeatureMap(degree, x.size())(x); }

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<Alternative> standardize(std::vector<Alternative> alternatives) {
  if (alternatives.empty()) return alternatives;
  const std::size_t k = alternatives.front().chars.size();
  for (std::size_t l = 0; l < k; ++l) {
    double mean = 0.0;
    for (const auto& a : alternatives) mean += a.chars[l];
    mean /= static_cast<double>(alternatives.size());
    double scale = 0.0;
    for (const auto& a : alternatives) scale = std::max(scale, std::abs(a.chars[l] - mean));
    for (auto& a : alternatives) a.chars[l] = scale > 0.0 ? (a.chars[l] - mean) / scale : 0.0;
  }
  return alternatives;
}

AffineReport affine_independent(const std::vector<Point>& points) {
  if (points.empty()) throw UsageError("affine independence of an empty set");
  const std::size_t dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim) throw UsageError("points have different dimensions");

  AffineReport report;
  report.required_rank = points.size() - 1;
  if (points.size() == 1) {
    report.independent = true;
    return report;
  }
  // Differences as columns so the pivoting chooses among points.
  Eigen::MatrixXd diffs(dim, points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) diffs(j, i - 1) = points[i][j] - points[0][j];

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(diffs);
  const auto& r = qr.matrixR();
  const std::size_t diag = std::min<std::size_t>(r.rows(), r.cols());
  const double top = diag > 0 ? std::abs(r(0, 0)) : 0.0;
  report.threshold = 1e-9 * top;
  for (std::size_t i = 0; i < diag; ++i) {
    const double piv = std::abs(r(i, i));
    if (top > 0.0 && piv > report.threshold) {
      ++report.rank;
      report.smallest_retained_pivot = piv;
    } else {
      report.largest_rejected_pivot = std::max(report.largest_rejected_pivot, piv);
    }
  }
  report.independent = report.rank == report.required_rank;
  return report;
}

ConvexReport convex_independent(const std::vector<Point>& points) {
  if (points.size() < 2) throw UsageError("convex independence needs at least two points");
  const std::size_t dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim) throw UsageError("points have different dimensions");

  // Per-coordinate scaling leaves hull membership unchanged.
  std::vector<double> scale(dim, 0.0);
  for (const auto& p : points)
    for (std::size_t j = 0; j < dim; ++j) scale[j] = std::max(scale[j], std::abs(p[j]));
  for (auto& s : scale)
    if (s == 0.0) s = 1.0;

  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    lp::Problem prob;
    prob.objective.assign(n - 1, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
      lp::Constraint row{{}, lp::Sense::Equal, points[i][j] / scale[j]};
      for (std::size_t o = 0; o < n; ++o)
        if (o != i) row.coeffs.push_back(points[o][j] / scale[j]);
      prob.rows.push_back(std::move(row));
    }
    prob.rows.push_back({std::vector<double>(n - 1, 1.0), lp::Sense::Equal, 1.0});
    lp::Options opt;
    opt.feasibility_tolerance = 1e-9;
    const auto sol = lp::solve(prob, opt);
    if (sol.status == lp::Status::IterationLimit) throw NumericError("convex-hull LP hit its iteration limit");
    if (sol.status != lp::Status::Infeasible) return {false, i};
  }
  return {true, std::nullopt};
}

bool generic_bound(std::size_t alternatives, int degree, std::size_t k) {
  if (degree < 1 || k == 0) throw UsageError("degree and k must be positive");
  return alternatives <= binomial(static_cast<std::size_t>(degree) + k, k);
}

}  // namespace choiceapprox
