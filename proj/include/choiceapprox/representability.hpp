#pragma once

#include <cstddef>
#include <vector>

#include "choiceapprox/choice_space.hpp"
#include "choiceapprox/rankings.hpp"

namespace choiceapprox {

inline constexpr double kRepresentabilityMargin = 1e-7;
inline constexpr double kConditionStarTolerance = 1e-8;

struct RepresentabilityResult {
  bool representable = false;
  /// Witness coefficients on the raw feature map, scaled so the smallest
  /// consecutive utility gap is 1. Empty when not representable.
  std::vector<double> beta;
  /// Optimal margin of the normalized LP (|beta|_inf <= 1 on column-scaled
  /// features).
  double margin = 0.0;
  /// Multipliers lambda >= 0 summing to 1 with
  /// sum_i lambda_i (p(x_i) - p(x_{i+1})) = 0, x_i in decreasing rank order.
  /// Empty when representable.
  std::vector<double> dual_certificate;
};

/// Decides whether some beta orders beta . p_d(x) exactly like the ranking.
/// The menu family must contain every pair of alternatives.
RepresentabilityResult is_representable(const Ranking& ranking, int degree, const ChoiceSpace& space);

struct Census {
  std::vector<Ranking> representable;
  std::vector<Ranking> unrepresentable;
};

Census census(int degree, const ChoiceSpace& space, std::size_t jobs = 1);

/// Independent check through the Farkas alternative: true iff no nonzero
/// lambda >= 0 satisfies the telescoped identity, i.e. the ranking is
/// representable.
bool condition_star_oracle(const Ranking& ranking, int degree, const ChoiceSpace& space);

/// Residual max-norm of the telescoped identity for a multiplier vector, on
/// column-scaled features.
double condition_star_residual(const Ranking& ranking, int degree, const ChoiceSpace& space,
                               const std::vector<double>& lambda);

}  // namespace choiceapprox
