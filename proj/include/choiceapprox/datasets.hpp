#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "choiceapprox/choice_space.hpp"

namespace choiceapprox {

/// Alternatives file: header `id,<char_1>,...,<char_k>` then one row per
/// alternative. Blank lines and lines starting with '#' are skipped.
struct Dataset {
  std::vector<std::string> characteristic_names;
  std::vector<Alternative> alternatives;
};

Dataset load_dataset(const std::string& path);
Dataset parse_dataset(std::istream& in, const std::string& source = "<input>");
/// Writes values with 17 significant digits.
void save_dataset(std::ostream& out, const Dataset& dataset);

/// Average price and catch rate of the four fishing modes (beach, boat,
/// charter, pier) from the recreational fishing survey data.
Dataset builtin_fishing();

/// Choice file: header `menu,alternative,probability`, menus written as ids
/// joined by '|'. Every member of every menu must appear exactly once.
StochasticChoice load_choice(const std::string& path, const SpacePtr& space);
StochasticChoice parse_choice(std::istream& in, const SpacePtr& space, const std::string& source = "<input>");
void save_choice(std::ostream& out, const StochasticChoice& rho);

}  // namespace choiceapprox
