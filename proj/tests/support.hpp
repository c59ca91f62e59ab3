#pragma once

#include <random>
#include <string>
#include <vector>

#include "choiceapprox/choice_space.hpp"
#include "choiceapprox/datasets.hpp"

namespace test {

inline choiceapprox::SpacePtr fishing() {
  return choiceapprox::ChoiceSpace::build(choiceapprox::builtin_fishing().alternatives,
                                          choiceapprox::MenuSpec::all_subsets());
}

inline std::vector<choiceapprox::Alternative> points(const std::vector<std::vector<double>>& rows) {
  std::vector<choiceapprox::Alternative> out;
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back({"a" + std::to_string(i + 1), rows[i]});
  return out;
}

inline choiceapprox::SpacePtr space_of(const std::vector<std::vector<double>>& rows,
                                       const choiceapprox::MenuSpec& spec = choiceapprox::MenuSpec::all_subsets()) {
  return choiceapprox::ChoiceSpace::build(points(rows), spec);
}

// Random interior choice function: independent Dirichlet(1) rows.
inline choiceapprox::StochasticChoice random_choice(const choiceapprox::SpacePtr& space, std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> v(space->entry_count());
  for (std::size_t m = 0; m < space->menus().size(); ++m) {
    double sum = 0.0;
    const std::size_t off = space->offset(m);
    for (std::size_t i = 0; i < space->menus()[m].size(); ++i) sum += v[off + i] = ex(rng) + 1e-3;
    for (std::size_t i = 0; i < space->menus()[m].size(); ++i) v[off + i] /= sum;
  }
  return {space, v};
}

// Points in general position with small integer-free coordinates.
inline std::vector<std::vector<double>> random_points(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> rows(n, std::vector<double>(k));
  for (auto& r : rows)
    for (auto& v : r) v = u(rng);
  return rows;
}

}  // namespace test
