#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace choiceapprox {

struct Alternative {
  std::string id;
  std::vector<double> chars;
};

using Menu = std::vector<std::size_t>;

enum class MenuMode { AllSubsets, SingleSet, Explicit };

struct MenuSpec {
  MenuMode mode = MenuMode::AllSubsets;
  std::vector<std::vector<std::string>> menus;  // ids, only for Explicit

  static MenuSpec all_subsets() { return {MenuMode::AllSubsets, {}}; }
  static MenuSpec single_set() { return {MenuMode::SingleSet, {}}; }
  static MenuSpec explicit_list(std::vector<std::vector<std::string>> menus) {
    return {MenuMode::Explicit, std::move(menus)};
  }
};

class ChoiceSpace;
using SpacePtr = std::shared_ptr<const ChoiceSpace>;

/// The alternative set X with its family of menus D.
///
/// Menus hold sorted alternative indices and are kept in lexicographic order.
/// Probabilities over the space live in one flat vector: the entries of menu m
/// occupy [offset(m), offset(m) + menus()[m].size()).
class ChoiceSpace {
 public:
  static SpacePtr build(std::vector<Alternative> alternatives, const MenuSpec& spec);

  std::size_t size() const noexcept { return alternatives_.size(); }
  std::size_t k() const noexcept { return k_; }
  const std::vector<Alternative>& alternatives() const noexcept { return alternatives_; }
  const Alternative& alternative(std::size_t i) const { return alternatives_.at(i); }
  std::size_t index_of(std::string_view id) const;

  const std::vector<Menu>& menus() const noexcept { return menus_; }
  std::size_t offset(std::size_t menu) const { return offsets_.at(menu); }
  std::size_t entry_count() const noexcept { return offsets_.back(); }
  std::optional<std::size_t> find_menu(std::span<const std::size_t> members) const;

  /// Number of menus with at least two members; the distance denominator.
  std::size_t informative_menu_count() const noexcept { return informative_; }

  bool has_all_pairs() const;
  /// Every 2- and 3-element subset of X is a menu.
  bool is_rich() const;

  bool same_layout(const ChoiceSpace& other) const;
  std::string menu_label(std::size_t menu) const;

 private:
  ChoiceSpace() = default;

  std::vector<Alternative> alternatives_;
  std::size_t k_ = 0;
  std::vector<Menu> menus_;
  std::vector<std::size_t> offsets_;
  std::size_t informative_ = 0;
};

/// A stochastic choice function stored as dense per-menu rows.
class StochasticChoice {
 public:
  StochasticChoice(SpacePtr space, std::vector<double> values);

  const SpacePtr& space() const noexcept { return space_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> row(std::size_t menu) const;
  /// rho(D, x); zero when x is not a member of the menu.
  double at(std::size_t menu, std::size_t alternative) const;

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// Euclidean norm over all (menu, alternative) entries divided by |D|.
double distance(const StochasticChoice& a, const StochasticChoice& b);

struct Violation {
  enum class Kind { Normalization, Range };
  Kind kind;
  std::size_t menu;
  std::size_t alternative;  // for range violations
  double value;             // row sum or offending entry
  std::string describe(const ChoiceSpace& space) const;
};

inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kIngestTolerance = 1e-9;

std::vector<Violation> validate(const StochasticChoice& rho);

/// Builds a choice function from raw rows, renormalizing rows whose sum is
/// within kIngestTolerance of 1 and rejecting anything worse.
StochasticChoice ingest_choice(SpacePtr space, std::vector<double> values);

}  // namespace choiceapprox
