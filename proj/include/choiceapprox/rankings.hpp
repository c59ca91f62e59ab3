#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "choiceapprox/choice_space.hpp"

namespace choiceapprox {

/// A strict preference order over X. Stored best-first; rank(x) is in
/// {1..|X|} with higher meaning better.
class Ranking {
 public:
  explicit Ranking(std::vector<std::size_t> best_first);

  /// Parses a 1-based label such as "1234" (best first). Labels for more
  /// than nine alternatives are dash separated: "10-2-...".
  static Ranking parse(std::string_view label, std::size_t n);

  std::size_t size() const noexcept { return order_.size(); }
  const std::vector<std::size_t>& order() const noexcept { return order_; }
  std::size_t rank(std::size_t alternative) const { return rank_.at(alternative); }
  bool prefers(std::size_t a, std::size_t b) const { return rank(a) > rank(b); }
  /// The rank-maximal member of a menu.
  std::size_t best_of(std::span<const std::size_t> menu) const;
  std::string label() const;

  friend auto operator<=>(const Ranking& a, const Ranking& b) { return a.order_ <=> b.order_; }
  friend bool operator==(const Ranking& a, const Ranking& b) { return a.order_ == b.order_; }

 private:
  std::vector<std::size_t> order_;
  std::vector<std::size_t> rank_;
};

inline constexpr std::size_t kMaxEnumerableAlternatives = 10;

/// All |X|! rankings in lexicographic order of their best-first sequences.
std::vector<Ranking> enumerate_rankings(const ChoiceSpace& space);

StochasticChoice vertex_choice(const Ranking& ranking, const SpacePtr& space);

Ranking reverse(const Ranking& ranking);

/// alpha * rho^pi + (1 - alpha) * rho^{reverse(pi)}, alpha in (0,1).
StochasticChoice mixture_target(const Ranking& ranking, double alpha, const SpacePtr& space);

using RankingMeasure = std::vector<std::pair<Ranking, double>>;

/// The random utility model induced by a probability measure over rankings.
StochasticChoice rum_from_measure(const RankingMeasure& measure, const SpacePtr& space);

/// Uniform measure over every ranking of X.
StochasticChoice uniform_rum(const SpacePtr& space);

/// Sum over menus of (|D| - 1).
std::size_t polytope_dimension(const ChoiceSpace& space);

/// Inner product rho^pi . t for a functional t laid out like the space entries.
double vertex_value(const Ranking& ranking, const ChoiceSpace& space, std::span<const double> t);

struct AdjacencyCertificate {
  Ranking ranking;
  std::vector<double> t;  // entry layout of the space
  double level = 0.0;
  double margin = 0.0;    // min over other rankings of rho^sigma . t - level
};

/// Separating functional witnessing that rho^pi and rho^{reverse(pi)} span an
/// edge of the random utility polytope. Requires a rich space with |X| >= 3;
/// the result is verified against every ranking before it is returned.
AdjacencyCertificate adjacency_certificate(const Ranking& ranking, const SpacePtr& space,
                                           double a = 1.0, double b = 2.0);

}  // namespace choiceapprox
