#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "choiceapprox/choice_space.hpp"
#include "choiceapprox/mixture_logit.hpp"

namespace choiceapprox {

enum class Engine { Greedy, Em };

const char* engine_name(Engine engine);

struct GreedyConfig {
  int steps = 1000;
  int restarts = 20;
  int inner_iterations = 500;
  std::uint64_t seed = 0;
  std::vector<double> eta;  // empty means zero fixed effects
};

struct EmConfig {
  std::size_t mixtures = 0;  // 0 means mixture_bound(space)
  int random_inits = 10;
  std::uint64_t seed = 0;
  double tolerance = 1e-6;
  int max_iterations = 5000;
  std::vector<double> eta;
};

struct FitReport {
  Engine engine = Engine::Greedy;
  int degree = 1;
  MixtureModel model;
  double error = 0.0;  // distance(model_choice(model), target)
  /// Greedy: error after each step. EM: L2 distance after each sweep of the
  /// best initialization.
  std::vector<double> trace;
  /// Greedy: convergence envelope sqrt(T'/(n+1)) for each step.
  std::vector<double> bound_trace;
  /// EM: weighted log-likelihood after each sweep of the best initialization.
  std::vector<double> likelihood_trace;
  std::uint64_t seed = 0;
  int iterations = 0;       // greedy steps or EM sweeps of the best start
  std::vector<double> eta;  // fixed effects used
  std::string config_json;
};

/// Greedy conditional-gradient approximation over mixtures of degree-d logit
/// components with fixed effects eta.
///
/// Step 1 fits a single component to the target. Step n >= 2 picks a new
/// component and a weight alpha from {2/(k+1) : k = 1..n} jointly minimizing
/// |target - (1 - alpha) rho^{n-1} - alpha rho|^2, keeping rho^{n-1} when no
/// candidate improves it. The component search is multi-start gradient
/// descent with backtracking; it approximates the arg-inf over the nonconvex
/// logit family.
FitReport greedy_fit(const StochasticChoice& target, int degree, const GreedyConfig& config);

/// sqrt(T' / (n + 1)) with T' = 8 / |D|.
double greedy_bound(int n, const ChoiceSpace& space);

/// Maximum-likelihood finite mixture logit by EM, treating the target
/// probabilities as fractional observation weights. Reports the best distance
/// over the random initializations.
FitReport em_fit(const StochasticChoice& target, int degree, const EmConfig& config);

/// Fixed-effects grid: every free coordinate of eta ranges over
/// [min, max] in `step` increments; the last alternative is pinned to 0.
struct GridSpec {
  double min = -10.0;
  double max = 10.0;
  double step = 1.0;
};

std::vector<std::vector<double>> grid_points(std::size_t alternatives, const GridSpec& grid);

/// The grid search scores every grid point with a reduced-budget greedy pass
/// and runs the chosen engine at full configuration on the best `refine`
/// points. `exhaustive` runs the full engine at every point instead.
struct ScreenConfig {
  bool exhaustive = false;
  int steps = 25;
  int restarts = 4;
  int inner_iterations = 100;
  std::size_t refine = 4;
};

struct ScreenEntry {
  std::vector<double> eta;
  double error = 0.0;
};

/// Screening pass over the grid, sorted by error (ties keep grid order).
std::vector<ScreenEntry> screen_fixed_effects(const StochasticChoice& target, int degree, const GridSpec& grid,
                                              const ScreenConfig& screen, std::uint64_t seed, std::size_t jobs);

/// Runs the engine at each candidate eta and keeps the smallest error.
FitReport refine_fixed_effects(const StochasticChoice& target, int degree, Engine engine,
                               const GreedyConfig& greedy, const EmConfig& em,
                               const std::vector<std::vector<double>>& candidates, std::size_t jobs);

FitReport fixed_effect_search(const StochasticChoice& target, int degree, Engine engine,
                              const GreedyConfig& greedy, const EmConfig& em, const GridSpec& grid,
                              const ScreenConfig& screen = {}, std::size_t jobs = 1);

std::string to_json(const FitReport& report);

}  // namespace choiceapprox
