#include "choiceapprox/choice_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "choiceapprox/error.hpp"

namespace choiceapprox {

namespace {

std::vector<Menu> all_nonsingleton_subsets(std::size_t n) {
  if (n >= 20) throw UsageError("too many alternatives for all-subsets menus");
  std::vector<Menu> menus;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    Menu m;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) m.push_back(i);
    if (m.size() >= 2) menus.push_back(std::move(m));
  }
  return menus;
}

}  // namespace

SpacePtr ChoiceSpace::build(std::vector<Alternative> alternatives, const MenuSpec& spec) {
  if (alternatives.empty()) throw DataError("no alternatives");
  auto space = std::shared_ptr<ChoiceSpace>(new ChoiceSpace());
  space->k_ = alternatives.front().chars.size();

  std::unordered_map<std::string, std::size_t> ids;
  for (std::size_t i = 0; i < alternatives.size(); ++i) {
    const auto& alt = alternatives[i];
    if (alt.id.empty()) throw DataError("alternative " + std::to_string(i) + " has an empty id");
    if (!ids.emplace(alt.id, i).second) throw DataError("duplicate alternative id '" + alt.id + "'");
    if (alt.chars.size() != space->k_)
      throw DataError("alternative '" + alt.id + "' has " + std::to_string(alt.chars.size()) +
                      " characteristics, expected " + std::to_string(space->k_));
    for (double v : alt.chars)
      if (!std::isfinite(v)) throw DataError("alternative '" + alt.id + "' has a non-finite characteristic");
  }
  space->alternatives_ = std::move(alternatives);
  const std::size_t n = space->alternatives_.size();

  std::vector<Menu> menus;
  switch (spec.mode) {
    case MenuMode::AllSubsets:
      menus = all_nonsingleton_subsets(n);
      break;
    case MenuMode::SingleSet: {
      Menu all(n);
      for (std::size_t i = 0; i < n; ++i) all[i] = i;
      menus.push_back(std::move(all));
      break;
    }
    case MenuMode::Explicit:
      for (const auto& names : spec.menus) {
        if (names.empty()) throw DataError("empty menu");
        Menu m;
        for (const auto& name : names) {
          auto it = ids.find(name);
          if (it == ids.end()) throw DataError("menu references unknown alternative '" + name + "'");
          m.push_back(it->second);
        }
        std::sort(m.begin(), m.end());
        if (std::adjacent_find(m.begin(), m.end()) != m.end())
          throw DataError("menu lists an alternative twice");
        menus.push_back(std::move(m));
      }
      break;
  }
  if (menus.empty()) throw DataError("no menus");
  std::sort(menus.begin(), menus.end());
  if (std::adjacent_find(menus.begin(), menus.end()) != menus.end()) throw DataError("duplicate menu");

  space->offsets_.assign(1, 0);
  for (const auto& m : menus) {
    space->offsets_.push_back(space->offsets_.back() + m.size());
    if (m.size() >= 2) ++space->informative_;
  }
  space->menus_ = std::move(menus);
  return space;
}

std::size_t ChoiceSpace::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < alternatives_.size(); ++i)
    if (alternatives_[i].id == id) return i;
  throw DataError("unknown alternative '" + std::string(id) + "'");
}

std::optional<std::size_t> ChoiceSpace::find_menu(std::span<const std::size_t> members) const {
  Menu key(members.begin(), members.end());
  std::sort(key.begin(), key.end());
  auto it = std::lower_bound(menus_.begin(), menus_.end(), key);
  if (it == menus_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - menus_.begin());
}

bool ChoiceSpace::has_all_pairs() const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t pair[] = {i, j};
      if (!find_menu(pair)) return false;
    }
  return true;
}

bool ChoiceSpace::is_rich() const {
  if (!has_all_pairs()) return false;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t l = j + 1; l < n; ++l) {
        const std::size_t triple[] = {i, j, l};
        if (!find_menu(triple)) return false;
      }
  return true;
}

bool ChoiceSpace::same_layout(const ChoiceSpace& other) const {
  return this == &other || (size() == other.size() && menus_ == other.menus_);
}

std::string ChoiceSpace::menu_label(std::size_t menu) const {
  std::string out;
  for (std::size_t x : menus_.at(menu)) {
    if (!out.empty()) out += '|';
    out += alternatives_[x].id;
  }
  return out;
}

StochasticChoice::StochasticChoice(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw UsageError("stochastic choice without a space");
  if (values_.size() != space_->entry_count())
    throw DataError("choice vector has " + std::to_string(values_.size()) + " entries, space expects " +
                    std::to_string(space_->entry_count()));
}

std::span<const double> StochasticChoice::row(std::size_t menu) const {
  const std::size_t begin = space_->offset(menu);
  return std::span<const double>(values_).subspan(begin, space_->menus()[menu].size());
}

double StochasticChoice::at(std::size_t menu, std::size_t alternative) const {
  const auto& m = space_->menus().at(menu);
  auto it = std::lower_bound(m.begin(), m.end(), alternative);
  if (it == m.end() || *it != alternative) return 0.0;
  return values_[space_->offset(menu) + static_cast<std::size_t>(it - m.begin())];
}

double distance(const StochasticChoice& a, const StochasticChoice& b) {
  if (!a.space()->same_layout(*b.space())) throw UsageError("distance between choice functions on different spaces");
  const auto& space = *a.space();
  double sum = 0.0;
  for (std::size_t m = 0; m < space.menus().size(); ++m) {
    if (space.menus()[m].size() < 2) continue;  // forced rho = 1
    auto ra = a.row(m);
    auto rb = b.row(m);
    for (std::size_t i = 0; i < ra.size(); ++i) {
      const double d = ra[i] - rb[i];
      sum += d * d;
    }
  }
  return std::sqrt(sum) / static_cast<double>(std::max<std::size_t>(1, space.informative_menu_count()));
}

std::string Violation::describe(const ChoiceSpace& space) const {
  std::ostringstream os;
  os.precision(17);
  if (kind == Kind::Normalization)
    os << "menu {" << space.menu_label(menu) << "} sums to " << value;
  else
    os << "menu {" << space.menu_label(menu) << "} entry '" << space.alternative(alternative).id
       << "' = " << value << " outside [0,1]";
  return os.str();
}

std::vector<Violation> validate(const StochasticChoice& rho) {
  std::vector<Violation> out;
  const auto& space = *rho.space();
  for (std::size_t m = 0; m < space.menus().size(); ++m) {
    auto r = rho.row(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      sum += r[i];
      if (!(r[i] >= 0.0 && r[i] <= 1.0))
        out.push_back({Violation::Kind::Range, m, space.menus()[m][i], r[i]});
    }
    if (!(std::abs(sum - 1.0) <= kNormalizationTolerance))
      out.push_back({Violation::Kind::Normalization, m, 0, sum});
  }
  return out;
}

StochasticChoice ingest_choice(SpacePtr space, std::vector<double> values) {
  StochasticChoice raw(space, values);
  for (std::size_t m = 0; m < space->menus().size(); ++m) {
    const std::size_t begin = space->offset(m);
    const std::size_t len = space->menus()[m].size();
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double v = values[begin + i];
      if (!std::isfinite(v) || v < 0.0 || v > 1.0 + kIngestTolerance)
        throw DataError("menu {" + space->menu_label(m) + "} has an entry outside [0,1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kIngestTolerance)
      throw DataError("menu {" + space->menu_label(m) + "} does not sum to 1");
    for (std::size_t i = 0; i < len; ++i) values[begin + i] = std::min(1.0, values[begin + i] / sum);
  }
  return StochasticChoice(std::move(space), std::move(values));
}

}  // namespace choiceapprox
