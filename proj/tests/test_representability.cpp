#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "choiceapprox/error.hpp"
#include "choiceapprox/features.hpp"
#include "choiceapprox/rankings.hpp"
#include "choiceapprox/representability.hpp"
#include "support.hpp"

using namespace choiceapprox;

namespace {

// Planar oracle for d = 1, k = 2: the order of beta.x only changes where beta
// is orthogonal to some difference x_i - x_j, so one probe between each pair
// of consecutive critical angles realizes every strict order.
std::set<std::string> planar_orders(const ChoiceSpace& space) {
  const auto& alts = space.alternatives();
  std::vector<double> angles;
  for (std::size_t i = 0; i < alts.size(); ++i)
    for (std::size_t j = i + 1; j < alts.size(); ++j) {
      const double dx = alts[i].chars[0] - alts[j].chars[0];
      const double dy = alts[i].chars[1] - alts[j].chars[1];
      double a = std::atan2(dx, -dy);  // beta orthogonal to (dx, dy)
      for (int s = 0; s < 2; ++s) {
        a = std::fmod(a + 2 * M_PI, 2 * M_PI);
        angles.push_back(a);
        a += M_PI;
      }
    }
  std::sort(angles.begin(), angles.end());
  angles.push_back(angles.front() + 2 * M_PI);
  std::set<std::string> out;
  for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
    const double th = 0.5 * (angles[i] + angles[i + 1]);
    std::vector<std::pair<double, std::size_t>> u;
    for (std::size_t x = 0; x < alts.size(); ++x)
      u.emplace_back(std::cos(th) * alts[x].chars[0] + std::sin(th) * alts[x].chars[1], x);
    std::sort(u.begin(), u.end(), std::greater<>());
    std::vector<std::size_t> order;
    for (auto& [v, x] : u) order.push_back(x);
    out.insert(Ranking(order).label());
  }
  return out;
}

}  // namespace

TEST_CASE("three affinely independent points represent everything") {
  auto space = test::space_of({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
  auto c = census(1, *space);
  CHECK(c.representable.size() == 6);
  CHECK(c.unrepresentable.empty());
}

TEST_CASE("fishing census at degree one and two") {
  auto space = test::fishing();
  const std::set<std::string> expected{"1234", "1243", "1324", "1423", "2134", "2143",
                                       "3241", "3412", "3421", "4231", "4312", "4321"};
  auto c1 = census(1, *space);
  std::set<std::string> got;
  for (const auto& r : c1.unrepresentable) got.insert(r.label());
  CHECK(got == expected);
  CHECK(c1.representable.size() == 12);

  const auto realizable = planar_orders(*space);
  for (const auto& r : enumerate_rankings(*space))
    CHECK_MESSAGE(realizable.count(r.label()) == (got.count(r.label()) ? 0u : 1u), r.label());

  auto c2 = census(2, *space, 2);
  CHECK(c2.unrepresentable.empty());
  CHECK(c2.representable.size() == 24);
}

TEST_CASE("witness coefficients order the alternatives") {
  auto space = test::fishing();
  for (int d : {1, 2})
    for (const auto& r : enumerate_rankings(*space)) {
      auto res = is_representable(r, d, *space);
      if (!res.representable) {
        CHECK(res.beta.empty());
        CHECK_FALSE(res.dual_certificate.empty());
        CHECK(condition_star_residual(r, d, *space, res.dual_certificate) < 1e-7);
        continue;
      }
      const FeatureMap map(d, 2);
      double prev = INFINITY;
      for (std::size_t x : r.order()) {
        const auto p = map(space->alternative(x).chars);
        double u = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) u += res.beta[j] * p[j];
        CHECK(u < prev);
        prev = u;
      }
    }
}

TEST_CASE("collinear middle point ranked last") {
  auto space = test::space_of({{0.0}, {1.0}, {2.0}});
  const auto r = Ranking::parse("132", 3);
  CHECK_FALSE(is_representable(r, 1, *space).representable);
  CHECK_FALSE(condition_star_oracle(r, 1, *space));
  CHECK(is_representable(Ranking::parse("321", 3), 1, *space).representable);
  // d=2 bends the line enough.
  CHECK(is_representable(r, 2, *space).representable);
}

TEST_CASE("primal and dual agree on every fishing ranking") {
  auto space = test::fishing();
  for (int d : {1, 2})
    for (const auto& r : enumerate_rankings(*space))
      CHECK(is_representable(r, d, *space).representable == condition_star_oracle(r, d, *space));
}

TEST_CASE("one characteristic: only monotone orders") {
  auto space = test::space_of({{0.3}, {-1.2}, {2.5}, {0.9}});
  for (const auto& r : enumerate_rankings(*space)) {
    std::vector<double> xs;
    for (std::size_t x : r.order()) xs.push_back(space->alternative(x).chars[0]);
    const bool monotone = std::is_sorted(xs.begin(), xs.end()) || std::is_sorted(xs.rbegin(), xs.rend());
    CHECK(is_representable(r, 1, *space).representable == monotone);
  }
}

TEST_CASE("representability needs pair menus") {
  auto single = test::space_of({{0.0}, {1.0}, {2.0}}, MenuSpec::single_set());
  CHECK_THROWS_AS(is_representable(Ranking::parse("123", 3), 1, *single), UsageError);
}
