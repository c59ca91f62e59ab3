#include "choiceapprox/mixture_logit.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "choiceapprox/error.hpp"
#include "choiceapprox/rankings.hpp"

namespace choiceapprox {

void MixtureModel::check(std::size_t alternatives, std::size_t dimension) const {
  if (weights.empty()) throw DataError("mixture has no components");
  if (components.size() != weights.size()) throw DataError("mixture weights and components disagree in count");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DataError("mixture weight is negative or non-finite");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DataError("mixture weights do not sum to 1");
  for (const auto& row : components) {
    if (row.size() != dimension) throw DataError("coefficient row has the wrong length");
    for (double b : row)
      if (!std::isfinite(b)) throw DataError("non-finite coefficient");
  }
  if (fixed_effects.size() != alternatives) throw DataError("fixed effects have the wrong length");
  for (double e : fixed_effects)
    if (!std::isfinite(e)) throw DataError("non-finite fixed effect");
}

FeatureTable::FeatureTable(const ChoiceSpace& space, int degree) : FeatureTable(space, FeatureMap(degree, space.k())) {}

FeatureTable::FeatureTable(const ChoiceSpace& space, const FeatureMap& map) : map_(map), rows_(map.evaluate(space)) {}

namespace {

double utility(std::span<const double> beta, std::span<const double> eta, std::size_t x,
               const FeatureTable& features) {
  const auto p = features.row(x);
  double u = eta.empty() ? 0.0 : eta[x];
  for (std::size_t j = 0; j < p.size(); ++j) u += beta[j] * p[j];
  return u;
}

// Softmax of the menu members' utilities into out (menu order).
void menu_softmax(std::span<const double> utilities, std::span<const std::size_t> menu, double* out) {
  double top = -INFINITY;
  for (std::size_t x : menu) top = std::max(top, utilities[x]);
  double sum = 0.0;
  for (std::size_t i = 0; i < menu.size(); ++i) {
    out[i] = std::exp(utilities[menu[i]] - top);
    sum += out[i];
  }
  for (std::size_t i = 0; i < menu.size(); ++i) out[i] /= sum;
}

}  // namespace

double logit_prob(std::span<const double> beta, std::span<const double> eta, std::span<const std::size_t> menu,
                  std::size_t x, const FeatureTable& features) {
  if (beta.size() != features.dimension()) throw UsageError("coefficient row has the wrong length");
  if (!eta.empty() && eta.size() != features.size()) throw UsageError("fixed effects have the wrong length");
  auto it = std::find(menu.begin(), menu.end(), x);
  if (it == menu.end()) throw UsageError("alternative is not in the menu");
  std::vector<double> u(features.size(), 0.0);
  for (std::size_t y : menu) u[y] = utility(beta, eta, y, features);
  std::vector<double> p(menu.size());
  menu_softmax(u, menu, p.data());
  return p[static_cast<std::size_t>(it - menu.begin())];
}

StochasticChoice model_choice(const MixtureModel& model, const SpacePtr& space) {
  const FeatureTable features(*space, model.degree);
  model.check(space->size(), features.dimension());
  std::vector<double> values(space->entry_count(), 0.0);
  std::vector<double> u(space->size());
  std::vector<double> buffer(space->size());
  for (std::size_t c = 0; c < model.size(); ++c) {
    if (model.weights[c] == 0.0) continue;
    for (std::size_t x = 0; x < space->size(); ++x) u[x] = utility(model.components[c], model.fixed_effects, x, features);
    for (std::size_t m = 0; m < space->menus().size(); ++m) {
      const auto& menu = space->menus()[m];
      menu_softmax(u, menu, buffer.data());
      for (std::size_t i = 0; i < menu.size(); ++i) values[space->offset(m) + i] += model.weights[c] * buffer[i];
    }
  }
  return StochasticChoice(space, std::move(values));
}

double log_likelihood(const StochasticChoice& target, const MixtureModel& model) {
  const auto predicted = model_choice(model, target.space());
  double total = 0.0;
  const auto t = target.values();
  const auto p = predicted.values();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] > 0.0) total += t[i] * std::log(std::max(p[i], kProbabilityFloor));
  return total;
}

std::size_t mixture_bound(const ChoiceSpace& space) { return polytope_dimension(space) + 1; }

std::string to_json(const MixtureModel& model) {
  nlohmann::json j;
  j["degree"] = model.degree;
  j["features"] = FeatureMap::kOrderingTag;
  j["lambda"] = model.weights;
  std::vector<double> flat;
  for (const auto& row : model.components) flat.insert(flat.end(), row.begin(), row.end());
  j["beta"] = flat;
  j["eta"] = model.fixed_effects;
  return j.dump();
}

MixtureModel model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model JSON: ") + e.what());
  }
  try {
    MixtureModel model;
    model.degree = j.at("degree").get<int>();
    if (j.contains("features") && j["features"].get<std::string>() != FeatureMap::kOrderingTag)
      throw DataError("model uses an unknown feature ordering");
    model.weights = j.at("lambda").get<std::vector<double>>();
    const auto flat = j.at("beta").get<std::vector<double>>();
    model.fixed_effects = j.at("eta").get<std::vector<double>>();
    if (model.weights.empty() || flat.size() % model.weights.size() != 0)
      throw DataError("model beta length is not a multiple of the component count");
    const std::size_t dim = flat.size() / model.weights.size();
    for (std::size_t c = 0; c < model.weights.size(); ++c)
      model.components.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(c * dim),
                                    flat.begin() + static_cast<std::ptrdiff_t>((c + 1) * dim));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model JSON: ") + e.what());
  }
}

}  // namespace choiceapprox
