#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "choiceapprox/choice_space.hpp"
#include "choiceapprox/features.hpp"

namespace choiceapprox {

/// Finite mixture of degree-d logit components sharing fixed effects.
struct MixtureModel {
  int degree = 1;
  std::vector<double> weights;                  // lambda, sums to 1
  std::vector<std::vector<double>> components;  // beta rows on the raw feature map
  std::vector<double> fixed_effects;            // eta, one per alternative

  std::size_t size() const noexcept { return weights.size(); }
  /// Throws DataError unless weights form a distribution and every row has
  /// `dimension` finite coefficients and eta has `alternatives` entries.
  void check(std::size_t alternatives, std::size_t dimension) const;
};

/// Precomputed p_d(x) rows for every alternative of a space.
class FeatureTable {
 public:
  FeatureTable(const ChoiceSpace& space, int degree);
  FeatureTable(const ChoiceSpace& space, const FeatureMap& map);

  const FeatureMap& map() const noexcept { return map_; }
  std::size_t dimension() const noexcept { return map_.dimension(); }
  std::span<const double> row(std::size_t alternative) const { return rows_.at(alternative); }
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  FeatureMap map_;
  std::vector<Point> rows_;
};

/// exp(beta.p(x) + eta(x)) / sum_{y in D} exp(beta.p(y) + eta(y)), stabilized by
/// subtracting the menu maximum utility.
double logit_prob(std::span<const double> beta, std::span<const double> eta, std::span<const std::size_t> menu,
                  std::size_t x, const FeatureTable& features);

StochasticChoice model_choice(const MixtureModel& model, const SpacePtr& space);

inline constexpr double kProbabilityFloor = 1e-300;

/// sum_D sum_x target(D,x) log model(D,x); zero-weight entries contribute 0.
double log_likelihood(const StochasticChoice& target, const MixtureModel& model);

/// polytope_dimension + 1: mixtures of this many components reach the whole
/// convex hull of the logit class.
std::size_t mixture_bound(const ChoiceSpace& space);

std::string to_json(const MixtureModel& model);
MixtureModel model_from_json(std::string_view text);

}  // namespace choiceapprox
