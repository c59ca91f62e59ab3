#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "choiceapprox/error.hpp"
#include "choiceapprox/fitters.hpp"
#include "logit_kernel.hpp"
#include "random.hpp"

namespace choiceapprox {

namespace {

constexpr double kStartScales[] = {0.1, 1.0, 10.0};

// Minimizes h(gamma) = min_{alpha in [lo, hi]} |e - alpha (rho(gamma) - prev)|^2
// over a single logit component; with lo == hi this is the fixed-weight
// objective.
class ComponentSearch {
 public:
  ComponentSearch(const detail::LogitKernel& kernel, const std::vector<double>& e, const std::vector<double>& prev)
      : kernel_(kernel), e_(e), prev_(prev), probs_(kernel.entries()), w_(kernel.entries()) {}

  struct Point {
    std::vector<double> gamma;
    double value = std::numeric_limits<double>::infinity();
    double alpha = 1.0;
  };

  double evaluate(const std::vector<double>& gamma, double lo, double hi, double* alpha, double* grad) {
    kernel_.probabilities(gamma.data(), probs_.data());
    double ev = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      const double v = probs_[i] - prev_[i];
      ev += e_[i] * v;
      vv += v * v;
    }
    double a = vv > 0.0 ? ev / vv : hi;
    a = std::clamp(a, lo, hi);
    if (alpha) *alpha = a;
    double value = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      const double r = e_[i] - a * (probs_[i] - prev_[i]);
      value += r * r;
      w_[i] = -2.0 * a * r;
    }
    if (grad) kernel_.pullback(probs_.data(), w_.data(), grad);
    return value;
  }

  // Gradient descent with backtracking (Armijo) and Barzilai-Borwein trial
  // steps.
  Point descend(std::vector<double> gamma, double lo, double hi, int iterations) {
    const std::size_t dim = gamma.size();
    std::vector<double> g(dim), g_new(dim), trial(dim);
    double value = evaluate(gamma, lo, hi, nullptr, g.data());
    double step = 1.0;
    for (int it = 0; it < iterations; ++it) {
      double gg = 0.0;
      for (double v : g) gg += v * v;
      if (gg < 1e-28) break;
      double new_value = 0.0;
      bool accepted = false;
      while (step > 1e-14) {
        for (std::size_t j = 0; j < dim; ++j) trial[j] = gamma[j] - step * g[j];
        new_value = evaluate(trial, lo, hi, nullptr, g_new.data());
        if (new_value <= value - 1e-4 * step * gg) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      double sy = 0.0, ss = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double s = trial[j] - gamma[j];
        sy += s * (g_new[j] - g[j]);
        ss += s * s;
      }
      const double decrease = value - new_value;
      gamma.swap(trial);
      g.swap(g_new);
      value = new_value;
      if (decrease <= 1e-15 * (1.0 + value)) break;
      step = sy > 0.0 ? std::min(ss / sy, 1e6) : 2.0 * step;
    }
    Point out;
    out.value = evaluate(gamma, lo, hi, &out.alpha, nullptr);
    out.gamma = std::move(gamma);
    return out;
  }

  const std::vector<double>& last_probabilities() const { return probs_; }

 private:
  const detail::LogitKernel& kernel_;
  const std::vector<double>& e_;
  const std::vector<double>& prev_;
  std::vector<double> probs_;
  std::vector<double> w_;
};

double l2_sq(const std::vector<double>& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

const char* engine_name(Engine engine) { return engine == Engine::Greedy ? "greedy" : "em"; }

double greedy_bound(int n, const ChoiceSpace& space) {
  if (n < 1) throw UsageError("greedy bound needs n >= 1");
  const double menus = static_cast<double>(std::max<std::size_t>(1, space.informative_menu_count()));
  return std::sqrt((8.0 / menus) / static_cast<double>(n + 1));
}

FitReport greedy_fit(const StochasticChoice& target, int degree, const GreedyConfig& config) {
  if (config.steps < 1) throw UsageError("greedy needs at least one step");
  if (config.restarts < 1) throw UsageError("greedy needs at least one restart");
  if (config.inner_iterations < 1) throw UsageError("greedy needs a positive inner iteration cap");
  const auto& space = *target.space();
  const detail::LogitKernel kernel(space, degree, config.eta);
  const std::size_t dim = kernel.dimension();
  const std::size_t entries = kernel.entries();
  const double menus = static_cast<double>(std::max<std::size_t>(1, space.informative_menu_count()));
  const std::vector<double> t(target.values().begin(), target.values().end());

  detail::Rng rng(config.seed);
  std::vector<double> current(entries, 0.0);
  std::vector<std::vector<double>> gammas;
  std::vector<double> weights;

  FitReport report;
  report.engine = Engine::Greedy;
  report.degree = degree;
  report.seed = config.seed;
  report.eta = config.eta.empty() ? std::vector<double>(space.size(), 0.0) : config.eta;

  std::vector<double> e(entries), comp(entries), candidate(entries);
  for (int n = 1; n <= config.steps; ++n) {
    for (std::size_t i = 0; i < entries; ++i) e[i] = t[i] - current[i];
    const double lo = n == 1 ? 1.0 : 2.0 / (n + 1.0);
    ComponentSearch search(kernel, e, current);

    ComponentSearch::Point best;
    for (int r = 0; r < config.restarts; ++r) {
      std::vector<double> start(dim);
      const double scale = kStartScales[r % 3];
      for (auto& v : start) v = scale * rng.normal();
      auto p = search.descend(std::move(start), lo, 1.0, config.inner_iterations);
      if (p.value < best.value) best = std::move(p);
    }

    // Snap the continuous weight onto the grid {2/(k+1)}: try the two grid
    // values around it, polishing the component at each.
    ComponentSearch::Point chosen;
    if (n == 1) {
      chosen = best;
    } else {
      const double kf = 2.0 / best.alpha - 1.0;
      const int k_lo = std::clamp(static_cast<int>(std::floor(kf + 1e-12)), 1, n);
      const int k_hi = std::clamp(static_cast<int>(std::ceil(kf - 1e-12)), 1, n);
      std::vector<int> ks{k_lo};
      if (k_hi != k_lo) ks.push_back(k_hi);
      for (int k : ks) {
        const double alpha = 2.0 / (k + 1.0);
        auto p = search.descend(best.gamma, alpha, alpha, config.inner_iterations);
        p.alpha = alpha;
        if (p.value < chosen.value) chosen = std::move(p);
      }
    }

    const double alpha = chosen.alpha;
    kernel.probabilities(chosen.gamma.data(), comp.data());
    for (std::size_t i = 0; i < entries; ++i) candidate[i] = (1.0 - alpha) * current[i] + alpha * comp[i];
    if (n == 1 || l2_sq(candidate, t) < l2_sq(current, t)) {
      current.swap(candidate);
      for (auto& w : weights) w *= 1.0 - alpha;
      weights.push_back(alpha);
      gammas.push_back(chosen.gamma);
    }
    report.trace.push_back(std::sqrt(l2_sq(current, t)) / menus);
    report.bound_trace.push_back(greedy_bound(n, space));
  }

  // Drop components whose weight vanished (alpha = 1 replaces the mixture).
  MixtureModel model;
  model.degree = degree;
  model.fixed_effects = report.eta;
  double total = 0.0;
  for (std::size_t c = 0; c < weights.size(); ++c)
    if (weights[c] > 0.0) total += weights[c];
  for (std::size_t c = 0; c < weights.size(); ++c) {
    if (!(weights[c] > 0.0)) continue;
    model.weights.push_back(weights[c] / total);
    model.components.push_back(kernel.raw_coefficients(gammas[c]));
  }
  report.model = std::move(model);
  report.error = report.trace.back();
  report.iterations = config.steps;
  nlohmann::json cfg{{"steps", config.steps},
                     {"restarts", config.restarts},
                     {"inner_iterations", config.inner_iterations},
                     {"seed", config.seed}};
  report.config_json = cfg.dump();
  return report;
}

}  // namespace choiceapprox
