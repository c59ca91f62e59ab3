#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "choiceapprox/choice_space.hpp"

namespace choiceapprox {

using Point = std::vector<double>;

/// Monomials of k characteristics with total degree in [1, d].
///
/// Exponent tuples are ordered by total degree, and within a degree in
/// descending lexicographic order, so the degree-1 block is x(1), ..., x(k) and
/// for k = 2, d = 2 the map is (x1, x2, x1^2, x1 x2, x2^2).
class FeatureMap {
 public:
  FeatureMap(int degree, std::size_t k);

  int degree() const noexcept { return degree_; }
  std::size_t k() const noexcept { return k_; }
  /// C(d + k, k) - 1.
  std::size_t dimension() const noexcept { return exponents_.size(); }
  const std::vector<std::vector<int>>& exponents() const noexcept { return exponents_; }

  Point operator()(std::span<const double> x) const;
  /// One feature row per alternative of the space.
  std::vector<Point> evaluate(const ChoiceSpace& space) const;

  static constexpr const char* kOrderingTag = "graded-desc-lex";

 private:
  int degree_;
  std::size_t k_;
  std::vector<std::vector<int>> exponents_;
};

Point monomial_features(std::span<const double> x, int degree);

std::size_t binomial(std::size_t n, std::size_t k);

/// Rescales each characteristic column to mean 0 and max-abs 1 (constant
/// columns become 0). Applied before the monomial map when requested.
std::vector<Alternative> standardize(std::vector<Alternative> alternatives);

struct AffineReport {
  bool independent = false;
  std::size_t rank = 0;
  std::size_t required_rank = 0;  // |points| - 1
  double threshold = 0.0;
  double smallest_retained_pivot = 0.0;  // 0 when nothing was retained
  double largest_rejected_pivot = 0.0;   // 0 when nothing was rejected
};

/// Affine independence by the rank of the difference matrix (p_i - p_0),
/// using column-pivoted QR with a threshold of 1e-9 times the largest pivot.
AffineReport affine_independent(const std::vector<Point>& points);

struct ConvexReport {
  bool independent = false;
  std::optional<std::size_t> witness;  // first point inside the hull of the others
};

/// Every point lies outside the convex hull of the others; one feasibility LP
/// per point.
ConvexReport convex_independent(const std::vector<Point>& points);

/// |X| <= C(d + k, k).
bool generic_bound(std::size_t alternatives, int degree, std::size_t k);

}  // namespace choiceapprox
