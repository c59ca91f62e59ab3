#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "choiceapprox/error.hpp"
#include "choiceapprox/fitters.hpp"
#include "choiceapprox/rankings.hpp"
#include "logit_kernel.hpp"
#include "random.hpp"

namespace choiceapprox {

namespace {

constexpr double kFrozenWeight = 1e-12;
constexpr double kMStepTolerance = 1e-10;
constexpr int kMStepIterations = 50;

// Raises sum_e w_e log p_e(gamma) by damped Newton steps, falling back to
// gradient ascent when the Newton direction is unusable. Never decreases the
// objective.
void maximize_component(const detail::LogitKernel& kernel, const std::vector<double>& w, std::vector<double>& gamma) {
  const std::size_t dim = kernel.dimension();
  Eigen::VectorXd grad(dim), trial(dim);
  Eigen::MatrixXd neg_h(dim, dim);
  double value = kernel.weighted_loglik(gamma.data(), w.data(), grad.data(), neg_h.data());
  for (int it = 0; it < kMStepIterations; ++it) {
    if (grad.lpNorm<Eigen::Infinity>() < kMStepTolerance) break;
    Eigen::VectorXd dir;
    const double ridge = 1e-10 * std::max(1.0, neg_h.diagonal().maxCoeff());
    Eigen::LDLT<Eigen::MatrixXd> ldlt(neg_h + ridge * Eigen::MatrixXd::Identity(dim, dim));
    bool newton = ldlt.info() == Eigen::Success && ldlt.isPositive();
    if (newton) {
      dir = ldlt.solve(grad);
      newton = dir.allFinite() && grad.dot(dir) > 0.0;
    }
    if (!newton) dir = grad;

    double step = 1.0;
    double new_value = value;
    bool accepted = false;
    const double slope = grad.dot(dir);
    for (int halving = 0; halving < 60; ++halving) {
      trial = Eigen::Map<const Eigen::VectorXd>(gamma.data(), dim) + step * dir;
      new_value = kernel.weighted_loglik(trial.data(), w.data(), nullptr, nullptr);
      if (std::isfinite(new_value) && new_value >= value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double moved = (step * dir).lpNorm<Eigen::Infinity>();
    std::copy(trial.data(), trial.data() + dim, gamma.begin());
    const double gain = new_value - value;
    value = kernel.weighted_loglik(gamma.data(), w.data(), grad.data(), neg_h.data());
    if (moved < kMStepTolerance || gain < kMStepTolerance * (1.0 + std::abs(value))) break;
  }
}

struct EmRun {
  std::vector<std::vector<double>> gammas;
  std::vector<double> weights;
  std::vector<double> distance_trace;
  std::vector<double> likelihood_trace;
  double distance = std::numeric_limits<double>::infinity();
  int sweeps = 0;
};

EmRun run_em(const detail::LogitKernel& kernel, const std::vector<double>& t, std::size_t mixtures,
             const EmConfig& config, detail::Rng& rng) {
  const std::size_t entries = kernel.entries();
  const std::size_t dim = kernel.dimension();
  EmRun run;
  run.gammas.assign(mixtures, std::vector<double>(dim));
  // Raw coefficients start at N(0,1) / rms so that no feature saturates the
  // softmax on its own.
  const auto& rms = kernel.raw_rms();
  std::vector<double> beta(dim);
  for (auto& g : run.gammas) {
    for (std::size_t j = 0; j < dim; ++j) beta[j] = rms[j] > 0.0 ? rng.normal() / rms[j] : 0.0;
    g = kernel.from_raw(beta);
  }
  run.weights.assign(mixtures, 1.0 / static_cast<double>(mixtures));

  std::vector<std::vector<double>> probs(mixtures, std::vector<double>(entries));
  std::vector<double> mix(entries), w(entries);
  double total_mass = 0.0;
  for (double v : t) total_mass += v;

  auto evaluate = [&]() {
    std::fill(mix.begin(), mix.end(), 0.0);
    for (std::size_t c = 0; c < mixtures; ++c) {
      kernel.probabilities(run.gammas[c].data(), probs[c].data());
      for (std::size_t i = 0; i < entries; ++i) mix[i] += run.weights[c] * probs[c][i];
    }
    double dist = 0.0, loglik = 0.0;
    for (std::size_t i = 0; i < entries; ++i) {
      dist += (mix[i] - t[i]) * (mix[i] - t[i]);
      if (t[i] > 0.0) loglik += t[i] * std::log(std::max(mix[i], kProbabilityFloor));
    }
    run.distance_trace.push_back(std::sqrt(dist));
    run.likelihood_trace.push_back(loglik);
  };

  evaluate();
  for (int sweep = 0; sweep < config.max_iterations; ++sweep) {
    // E-step responsibilities and weight update.
    std::vector<double> new_weights(mixtures, 0.0);
    for (std::size_t c = 0; c < mixtures; ++c) {
      double mass = 0.0;
      for (std::size_t i = 0; i < entries; ++i)
        if (t[i] > 0.0) mass += t[i] * run.weights[c] * probs[c][i] / std::max(mix[i], kProbabilityFloor);
      new_weights[c] = mass / total_mass;
    }
    // M-step on each live component with responsibility-weighted targets.
    for (std::size_t c = 0; c < mixtures; ++c) {
      if (run.weights[c] < kFrozenWeight) continue;
      for (std::size_t i = 0; i < entries; ++i)
        w[i] = t[i] > 0.0 ? t[i] * run.weights[c] * probs[c][i] / std::max(mix[i], kProbabilityFloor) : 0.0;
      maximize_component(kernel, w, run.gammas[c]);
    }
    double sum = 0.0;
    for (double v : new_weights) sum += v;
    for (std::size_t c = 0; c < mixtures; ++c) run.weights[c] = new_weights[c] / sum;

    evaluate();
    run.sweeps = sweep + 1;
    const std::size_t last = run.distance_trace.size() - 1;
    if (std::abs(run.distance_trace[last] - run.distance_trace[last - 1]) < config.tolerance) break;
  }
  run.distance = run.distance_trace.back();
  return run;
}

}  // namespace

FitReport em_fit(const StochasticChoice& target, int degree, const EmConfig& config) {
  if (config.random_inits < 1) throw UsageError("EM needs at least one initialization");
  if (config.max_iterations < 1) throw UsageError("EM needs a positive iteration cap");
  if (!(config.tolerance > 0.0)) throw UsageError("EM tolerance must be positive");
  const auto& space = *target.space();
  const std::size_t mixtures = config.mixtures == 0 ? mixture_bound(space) : config.mixtures;
  const detail::LogitKernel kernel(space, degree, config.eta);
  const std::vector<double> t(target.values().begin(), target.values().end());
  const double menus = static_cast<double>(std::max<std::size_t>(1, space.informative_menu_count()));

  detail::Rng rng(config.seed);
  EmRun best;
  for (int init = 0; init < config.random_inits; ++init) {
    auto run = run_em(kernel, t, mixtures, config, rng);
    if (run.distance < best.distance) best = std::move(run);
  }

  FitReport report;
  report.engine = Engine::Em;
  report.degree = degree;
  report.seed = config.seed;
  report.eta = config.eta.empty() ? std::vector<double>(space.size(), 0.0) : config.eta;
  report.error = best.distance / menus;
  report.trace = best.distance_trace;
  report.likelihood_trace = best.likelihood_trace;
  report.iterations = best.sweeps;
  report.model.degree = degree;
  report.model.fixed_effects = report.eta;
  double total = 0.0;
  for (double w : best.weights) total += w;
  for (std::size_t c = 0; c < best.weights.size(); ++c) {
    report.model.weights.push_back(best.weights[c] / total);
    report.model.components.push_back(kernel.raw_coefficients(best.gammas[c]));
  }
  nlohmann::json cfg{{"mixtures", mixtures},
                     {"random_inits", config.random_inits},
                     {"tolerance", config.tolerance},
                     {"max_iterations", config.max_iterations},
                     {"seed", config.seed}};
  report.config_json = cfg.dump();
  return report;
}

}  // namespace choiceapprox
