#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>

#include "choiceapprox/error.hpp"
#include "choiceapprox/fitters.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace choiceapprox {

std::vector<std::vector<double>> grid_points(std::size_t alternatives, const GridSpec& grid) {
  if (alternatives == 0) throw UsageError("grid over an empty space");
  if (!(grid.step > 0.0) || !(grid.max >= grid.min) || !std::isfinite(grid.min) || !std::isfinite(grid.max))
    throw UsageError("fixed-effect grid needs min <= max and a positive step");
  std::vector<double> axis;
  const auto count = static_cast<std::size_t>(std::floor((grid.max - grid.min) / grid.step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) axis.push_back(grid.min + grid.step * static_cast<double>(i));

  const std::size_t free = alternatives - 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < free; ++i) {
    total *= axis.size();
    if (total > 50'000'000) throw UsageError("fixed-effect grid is too large");
  }
  std::vector<std::vector<double>> points;
  points.reserve(total);
  std::vector<std::size_t> idx(free, 0);
  for (std::size_t p = 0; p < total; ++p) {
    std::vector<double> eta(alternatives, 0.0);
    for (std::size_t j = 0; j < free; ++j) eta[j] = axis[idx[j]];
    points.push_back(std::move(eta));
    for (std::size_t j = free; j-- > 0;) {  // last free coordinate varies fastest
      if (++idx[j] < axis.size()) break;
      idx[j] = 0;
    }
  }
  return points;
}

std::vector<ScreenEntry> screen_fixed_effects(const StochasticChoice& target, int degree, const GridSpec& grid,
                                              const ScreenConfig& screen, std::uint64_t seed, std::size_t jobs) {
  auto points = grid_points(target.space()->size(), grid);
  std::vector<ScreenEntry> entries(points.size());
  detail::parallel_for(points.size(), jobs, [&](std::size_t i) {
    GreedyConfig cfg;
    cfg.steps = screen.steps;
    cfg.restarts = screen.restarts;
    cfg.inner_iterations = screen.inner_iterations;
    cfg.seed = detail::derive_seed(seed, i);
    cfg.eta = points[i];
    entries[i] = {points[i], greedy_fit(target, degree, cfg).error};
  });
  std::stable_sort(entries.begin(), entries.end(),
                   [](const ScreenEntry& a, const ScreenEntry& b) { return a.error < b.error; });
  return entries;
}

FitReport refine_fixed_effects(const StochasticChoice& target, int degree, Engine engine,
                               const GreedyConfig& greedy, const EmConfig& em,
                               const std::vector<std::vector<double>>& candidates, std::size_t jobs) {
  if (candidates.empty()) throw UsageError("no fixed-effect candidates");
  std::vector<FitReport> reports(candidates.size());
  detail::parallel_for(candidates.size(), jobs, [&](std::size_t i) {
    if (engine == Engine::Greedy) {
      auto cfg = greedy;
      cfg.eta = candidates[i];
      reports[i] = greedy_fit(target, degree, cfg);
    } else {
      auto cfg = em;
      cfg.eta = candidates[i];
      reports[i] = em_fit(target, degree, cfg);
    }
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < reports.size(); ++i)
    if (reports[i].error < reports[best].error) best = i;
  return std::move(reports[best]);
}

FitReport fixed_effect_search(const StochasticChoice& target, int degree, Engine engine,
                              const GreedyConfig& greedy, const EmConfig& em, const GridSpec& grid,
                              const ScreenConfig& screen, std::size_t jobs) {
  std::vector<std::vector<double>> candidates;
  if (screen.exhaustive) {
    candidates = grid_points(target.space()->size(), grid);
  } else {
    const auto ranked = screen_fixed_effects(target, degree, grid, screen,
                                             engine == Engine::Greedy ? greedy.seed : em.seed, jobs);
    const std::size_t keep = std::min(std::max<std::size_t>(1, screen.refine), ranked.size());
    for (std::size_t i = 0; i < keep; ++i) candidates.push_back(ranked[i].eta);
  }
  return refine_fixed_effects(target, degree, engine, greedy, em, candidates, jobs);
}

std::string to_json(const FitReport& report) {
  nlohmann::json j;
  j["engine"] = engine_name(report.engine);
  j["degree"] = report.degree;
  j["error"] = report.error;
  j["seed"] = report.seed;
  j["iterations"] = report.iterations;
  j["eta"] = report.eta;
  j["trace"] = report.trace;
  if (!report.bound_trace.empty()) j["bound_trace"] = report.bound_trace;
  if (!report.likelihood_trace.empty()) j["likelihood_trace"] = report.likelihood_trace;
  j["config"] = report.config_json.empty() ? nlohmann::json::object() : nlohmann::json::parse(report.config_json);
  j["model"] = nlohmann::json::parse(to_json(report.model));
  return j.dump();
}

}  // namespace choiceapprox
