#include "choiceapprox/rankings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "choiceapprox/error.hpp"

namespace choiceapprox {

Ranking::Ranking(std::vector<std::size_t> best_first) : order_(std::move(best_first)) {
  const std::size_t n = order_.size();
  if (n == 0) throw UsageError("empty ranking");
  rank_.assign(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t x = order_[pos];
    if (x >= n || rank_[x] != 0) throw UsageError("ranking is not a permutation");
    rank_[x] = n - pos;
  }
}

Ranking Ranking::parse(std::string_view label, std::size_t n) {
  std::vector<std::size_t> order;
  if (label.find('-') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= label.size()) {
      const std::size_t end = std::min(label.find('-', start), label.size());
      const auto token = label.substr(start, end - start);
      if (token.empty()) throw UsageError("malformed ranking label");
      std::size_t value = 0;
      for (char c : token) {
        if (c < '0' || c > '9') throw UsageError("malformed ranking label");
        value = value * 10 + static_cast<std::size_t>(c - '0');
      }
      if (value == 0) throw UsageError("ranking labels are 1-based");
      order.push_back(value - 1);
      start = end + 1;
    }
  } else {
    for (char c : label) {
      if (c < '1' || c > '9') throw UsageError("malformed ranking label '" + std::string(label) + "'");
      order.push_back(static_cast<std::size_t>(c - '1'));
    }
  }
  if (order.size() != n)
    throw UsageError("ranking '" + std::string(label) + "' does not cover " + std::to_string(n) + " alternatives");
  return Ranking(std::move(order));
}

std::size_t Ranking::best_of(std::span<const std::size_t> menu) const {
  return *std::max_element(menu.begin(), menu.end(),
                           [&](std::size_t a, std::size_t b) { return rank_[a] < rank_[b]; });
}

std::string Ranking::label() const {
  std::string out;
  const bool dashed = order_.size() > 9;
  for (std::size_t x : order_) {
    if (dashed && !out.empty()) out += '-';
    out += std::to_string(x + 1);
  }
  return out;
}

std::vector<Ranking> enumerate_rankings(const ChoiceSpace& space) {
  const std::size_t n = space.size();
  if (n > kMaxEnumerableAlternatives)
    throw UsageError("ranking enumeration is limited to " + std::to_string(kMaxEnumerableAlternatives) +
                     " alternatives");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Ranking> out;
  do {
    out.emplace_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

StochasticChoice vertex_choice(const Ranking& ranking, const SpacePtr& space) {
  if (ranking.size() != space->size()) throw UsageError("ranking does not match the space");
  std::vector<double> values(space->entry_count(), 0.0);
  for (std::size_t m = 0; m < space->menus().size(); ++m) {
    const auto& menu = space->menus()[m];
    const std::size_t best = ranking.best_of(menu);
    const auto pos = static_cast<std::size_t>(std::find(menu.begin(), menu.end(), best) - menu.begin());
    values[space->offset(m) + pos] = 1.0;
  }
  return StochasticChoice(space, std::move(values));
}

Ranking reverse(const Ranking& ranking) {
  std::vector<std::size_t> order(ranking.order().rbegin(), ranking.order().rend());
  return Ranking(std::move(order));
}

StochasticChoice mixture_target(const Ranking& ranking, double alpha, const SpacePtr& space) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("mixture weight must lie in (0,1)");
  return rum_from_measure({{ranking, alpha}, {reverse(ranking), 1.0 - alpha}}, space);
}

StochasticChoice rum_from_measure(const RankingMeasure& measure, const SpacePtr& space) {
  if (measure.empty()) throw UsageError("empty ranking measure");
  double total = 0.0;
  for (const auto& [ranking, w] : measure) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw UsageError("ranking measure has a negative weight");
    if (ranking.size() != space->size()) throw UsageError("ranking does not match the space");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw UsageError("ranking measure does not sum to 1");

  std::vector<double> values(space->entry_count(), 0.0);
  for (const auto& [ranking, w] : measure) {
    for (std::size_t m = 0; m < space->menus().size(); ++m) {
      const auto& menu = space->menus()[m];
      const std::size_t best = ranking.best_of(menu);
      const auto pos = static_cast<std::size_t>(std::find(menu.begin(), menu.end(), best) - menu.begin());
      values[space->offset(m) + pos] += w;
    }
  }
  return StochasticChoice(space, std::move(values));
}

StochasticChoice uniform_rum(const SpacePtr& space) {
  auto all = enumerate_rankings(*space);
  RankingMeasure measure;
  const double w = 1.0 / static_cast<double>(all.size());
  for (auto& r : all) measure.emplace_back(std::move(r), w);
  // Summing n! equal weights can drift past the 1e-12 measure check for large n.
  measure.back().second = 1.0 - w * static_cast<double>(all.size() - 1);
  return rum_from_measure(measure, space);
}

std::size_t polytope_dimension(const ChoiceSpace& space) {
  std::size_t dim = 0;
  for (const auto& m : space.menus()) dim += m.size() - 1;
  return dim;
}

double vertex_value(const Ranking& ranking, const ChoiceSpace& space, std::span<const double> t) {
  double sum = 0.0;
  for (std::size_t m = 0; m < space.menus().size(); ++m) {
    const auto& menu = space.menus()[m];
    const std::size_t best = ranking.best_of(menu);
    const auto pos = static_cast<std::size_t>(std::find(menu.begin(), menu.end(), best) - menu.begin());
    sum += t[space.offset(m) + pos];
  }
  return sum;
}

namespace {

// Certificate entries addressed by induction labels: label i is the
// alternative in position i of the ranking (x_1 best).
class LabelledFunctional {
 public:
  LabelledFunctional(const ChoiceSpace& space, const Ranking& ranking)
      : space_(space), labels_(ranking.order()), t_(space.entry_count(), 0.0) {}

  double& at(std::initializer_list<std::size_t> menu_labels, std::size_t chosen_label) {
    std::vector<std::size_t> members;
    for (std::size_t l : menu_labels) members.push_back(labels_[l]);
    auto m = space_.find_menu(members);
    if (!m) throw UsageError("adjacency certificate needs every pair and triple as a menu");
    const auto& menu = space_.menus()[*m];
    const std::size_t x = labels_[chosen_label];
    const auto pos = static_cast<std::size_t>(std::find(menu.begin(), menu.end(), x) - menu.begin());
    return t_[space_.offset(*m) + pos];
  }

  // rho^sigma . t where sigma ranks the first `prefix` labels and only menus
  // inside that prefix count.
  double value_on_prefix(const std::vector<std::size_t>& sigma_labels_best_first, std::size_t prefix) const {
    std::vector<std::size_t> rank(space_.size(), 0);
    std::vector<bool> inside(space_.size(), false);
    for (std::size_t pos = 0; pos < prefix; ++pos) {
      const std::size_t x = labels_[sigma_labels_best_first[pos]];
      rank[x] = prefix - pos;
      inside[x] = true;
    }
    double sum = 0.0;
    for (std::size_t m = 0; m < space_.menus().size(); ++m) {
      const auto& menu = space_.menus()[m];
      if (!std::all_of(menu.begin(), menu.end(), [&](std::size_t x) { return inside[x]; })) continue;
      std::size_t best_pos = 0;
      for (std::size_t p = 1; p < menu.size(); ++p)
        if (rank[menu[p]] > rank[menu[best_pos]]) best_pos = p;
      sum += t_[space_.offset(m) + best_pos];
    }
    return sum;
  }

  // Minimum of rho^sigma . t over rankings of the first `prefix` labels other
  // than the identity and its reverse.
  double min_other_value(std::size_t prefix) const {
    std::vector<std::size_t> sigma(prefix);
    std::iota(sigma.begin(), sigma.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      if (is_identity_or_reverse(sigma)) continue;
      best = std::min(best, value_on_prefix(sigma, prefix));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return best;
  }

  std::vector<double> release() && { return std::move(t_); }

  static bool is_identity_or_reverse(const std::vector<std::size_t>& sigma) {
    const std::size_t n = sigma.size();
    bool id = true, rev = true;
    for (std::size_t i = 0; i < n; ++i) {
      id = id && sigma[i] == i;
      rev = rev && sigma[i] == n - 1 - i;
    }
    return id || rev;
  }

 private:
  const ChoiceSpace& space_;
  const std::vector<std::size_t>& labels_;
  std::vector<double> t_;
};

}  // namespace

AdjacencyCertificate adjacency_certificate(const Ranking& ranking, const SpacePtr& space, double a, double b) {
  const std::size_t n = space->size();
  if (ranking.size() != n) throw UsageError("ranking does not match the space");
  if (n < 3) throw UsageError("adjacency certificates need at least three alternatives");
  if (n > kMaxEnumerableAlternatives) throw UsageError("too many alternatives to verify a certificate");
  if (!space->is_rich()) throw UsageError("adjacency certificate needs a rich menu family");
  if (!(b > a && a > 0.0)) throw UsageError("certificate parameters need b > a > 0");

  LabelledFunctional t(*space, ranking);
  t.at({0, 1}, 0) = a;
  t.at({1, 2}, 1) = -b;
  t.at({0, 2}, 0) = b - a;
  t.at({0, 1, 2}, 1) = a + b;

  for (std::size_t m = 4; m <= n; ++m) {
    const double margin = t.min_other_value(m - 1);
    if (!(margin > 0.0)) throw NumericError("adjacency certificate lost strictness during induction");
    const double eps = 0.5 * margin;
    const std::size_t last = m - 1;
    t.at({0, 1}, 0) += eps;
    for (std::size_t i = 0; i < last; ++i) t.at({i, last}, i) = -eps / static_cast<double>(m - 1);
    t.at({m - 3, m - 2, last}, m - 2) = 2.0 * eps;
  }

  AdjacencyCertificate cert{ranking, std::move(t).release(), 0.0, 0.0};
  const Ranking rev = reverse(ranking);
  double worst_tie = 0.0;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& sigma : enumerate_rankings(*space)) {
    const double v = vertex_value(sigma, *space, cert.t) - cert.level;
    if (sigma == ranking || sigma == rev)
      worst_tie = std::max(worst_tie, std::abs(v));
    else
      margin = std::min(margin, v);
  }
  if (worst_tie > 1e-9 || !(margin > 1e-9))
    throw NumericError("adjacency certificate failed verification");
  cert.margin = margin;
  return cert;
}

}  // namespace choiceapprox
