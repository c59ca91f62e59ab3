#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "choiceapprox/choice_space.hpp"
#include "choiceapprox/fitters.hpp"
#include "choiceapprox/features.hpp"
#include "choiceapprox/rankings.hpp"
#include "choiceapprox/representability.hpp"

namespace choiceapprox {

enum class Format { Text, Csv, Json };

Format parse_format(std::string_view name);

struct TableConfig {
  GreedyConfig greedy;
  EmConfig em;
  bool run_greedy = true;
  bool run_em = true;
  std::vector<int> degrees{1, 2};
  std::size_t jobs = 1;
  GridSpec grid;          // table 2 only
  ScreenConfig screen;    // table 2 only
};

struct TableEntry {
  std::string ranking;
  int degree = 1;
  Engine engine = Engine::Greedy;
  double error = 0.0;
  std::uint64_t seed = 0;
  int iterations = 0;
  std::vector<double> eta;
};

struct TableReport {
  std::string title;
  /// Row labels in display order with the d=1 representability of each row.
  std::vector<std::pair<std::string, bool>> rows;
  std::vector<int> degrees;
  std::vector<Engine> engines;
  std::vector<TableEntry> entries;
  bool searched_eta = false;

  const TableEntry* find(std::string_view ranking, int degree, Engine engine) const;
};

/// Every ranking targeted by its vertex choice function, at eta = 0, for each
/// degree and engine; d=1 unrepresentable rankings come first.
TableReport run_table1(const SpacePtr& space, const TableConfig& config);

/// The rankings pi unrepresentable at d=1 with label(pi) < label(reverse(pi)),
/// each targeted by 1/2 rho^pi + 1/2 rho^{reverse(pi)} under the fixed-effect
/// grid search.
std::vector<Ranking> table2_rankings(const SpacePtr& space, std::size_t jobs = 1);
TableReport run_table2(const SpacePtr& space, const TableConfig& config);

std::string render(const TableReport& report, Format format);

struct DiagnoseReport {
  std::size_t alternatives = 0;
  std::size_t k = 0;
  int degree = 1;
  std::size_t feature_dimension = 0;
  bool generic_bound_holds = false;
  std::size_t generic_capacity = 0;  // C(d + k, k)
  AffineReport affine;
  ConvexReport convex;
  std::size_t polytope_dimension = 0;
  std::size_t mixture_bound = 0;
  std::vector<std::string> unrepresentable;
  std::size_t ranking_count = 0;
};

DiagnoseReport run_diagnose(const SpacePtr& space, int degree, std::size_t jobs = 1);
std::string render(const DiagnoseReport& report, Format format);

struct CensusReport {
  int degree = 1;
  std::vector<std::string> representable;
  std::vector<std::string> unrepresentable;
};

CensusReport run_census(const SpacePtr& space, int degree, std::size_t jobs = 1);
std::string render(const CensusReport& report, Format format);

std::string render(const AdjacencyCertificate& certificate, const ChoiceSpace& space, Format format);

std::string render(const FitReport& report, const ChoiceSpace& space, Format format);

/// Fixed-point rendering used by the text tables.
std::string fixed3(double value);

}  // namespace choiceapprox
