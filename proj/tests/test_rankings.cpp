#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "choiceapprox/error.hpp"
#include "choiceapprox/rankings.hpp"
#include "support.hpp"

using namespace choiceapprox;

namespace {

// Oracle for rho^sigma . t: pick the sigma-first member of each menu directly.
double dot_vertex(const std::vector<std::size_t>& best_first, const ChoiceSpace& space, const std::vector<double>& t) {
  double total = 0.0;
  for (std::size_t m = 0; m < space.menus().size(); ++m) {
    const auto& menu = space.menus()[m];
    for (std::size_t x : best_first) {
      auto it = std::find(menu.begin(), menu.end(), x);
      if (it == menu.end()) continue;
      total += t[space.offset(m) + static_cast<std::size_t>(it - menu.begin())];
      break;
    }
  }
  return total;
}

double entry(const AdjacencyCertificate& c, const ChoiceSpace& space, std::vector<std::size_t> menu, std::size_t x) {
  const auto m = space.find_menu(menu);
  REQUIRE(m.has_value());
  const auto& members = space.menus()[*m];
  const auto pos = static_cast<std::size_t>(std::find(members.begin(), members.end(), x) - members.begin());
  return c.t[space.offset(*m) + pos];
}

}  // namespace

TEST_CASE("ranking enumeration sizes and order") {
  CHECK(enumerate_rankings(*test::space_of({{0.0}}, MenuSpec::single_set())).size() == 1);
  CHECK(enumerate_rankings(*test::space_of({{0.0}, {1.0}, {2.0}})).size() == 6);
  auto all = enumerate_rankings(*test::fishing());
  CHECK(all.size() == 24);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(all.front().label() == "1234");
  CHECK(all.back().label() == "4321");
}

TEST_CASE("labels parse best first and one based") {
  auto r = Ranking::parse("3142", 4);
  CHECK(r.order() == std::vector<std::size_t>{2, 0, 3, 1});
  CHECK(r.rank(2) == 4);
  CHECK(r.rank(1) == 1);
  CHECK(r.prefers(0, 3));
  CHECK(r.label() == "3142");
  CHECK_THROWS_AS(Ranking::parse("1123", 4), UsageError);
  CHECK_THROWS_AS(Ranking::parse("123", 4), UsageError);
  CHECK_THROWS_AS(Ranking::parse("12a4", 4), UsageError);
  std::vector<std::size_t> ten(10);
  std::iota(ten.rbegin(), ten.rend(), 0);
  CHECK(Ranking(ten).label() == "10-9-8-7-6-5-4-3-2-1");
  CHECK(Ranking::parse("10-9-8-7-6-5-4-3-2-1", 10) == Ranking(ten));
}

TEST_CASE("vertex choice functions") {
  auto pair = test::space_of({{0.0}, {1.0}});
  auto v = vertex_choice(Ranking::parse("12", 2), pair);
  CHECK(v.at(0, 0) == 1.0);
  CHECK(v.at(0, 1) == 0.0);

  auto space = test::fishing();
  auto rho = vertex_choice(Ranking::parse("1234", 4), space);
  const std::size_t bcp[] = {1, 2, 3};
  CHECK(rho.at(*space->find_menu(bcp), 1) == 1.0);
  for (const auto& r : enumerate_rankings(*space)) {
    auto f = vertex_choice(r, space);
    for (std::size_t m = 0; m < space->menus().size(); ++m) {
      double sum = 0.0;
      for (double p : f.row(m)) {
        CHECK((p == 0.0 || p == 1.0));
        sum += p;
      }
      CHECK(sum == 1.0);
    }
  }
}

TEST_CASE("reverse is an involution") {
  CHECK(reverse(Ranking::parse("1234", 4)).label() == "4321");
  CHECK(reverse(Ranking::parse("1", 1)).label() == "1");
  for (const auto& r : enumerate_rankings(*test::fishing())) CHECK(reverse(reverse(r)) == r);
}

TEST_CASE("edge midpoints") {
  auto pair = test::space_of({{0.0}, {1.0}});
  auto half = mixture_target(Ranking::parse("21", 2), 0.5, pair);
  CHECK(half.at(0, 0) == 0.5);
  CHECK(half.at(0, 1) == 0.5);

  auto space = test::fishing();
  const auto r = Ranking::parse("2413", 4);
  auto mid = mixture_target(r, 0.5, space);
  const std::size_t all[] = {0, 1, 2, 3};
  const auto m = *space->find_menu(all);
  CHECK(mid.at(m, 1) == 0.5);  // best
  CHECK(mid.at(m, 2) == 0.5);  // worst
  CHECK(mid.at(m, 3) == 0.0);
  CHECK(mid.at(m, 0) == 0.0);
  auto skew = mixture_target(r, 0.3, space);
  for (std::size_t k = 0; k < space->menus().size(); ++k) {
    double s = 0.0;
    for (double p : skew.row(k)) s += p;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(mixture_target(r, 0.0, space), UsageError);
  CHECK_THROWS_AS(mixture_target(r, 1.0, space), UsageError);
}

TEST_CASE("random utility models from measures") {
  auto space = test::fishing();
  const auto r = Ranking::parse("3142", 4);
  auto point = rum_from_measure({{r, 1.0}}, space);
  CHECK(distance(point, vertex_choice(r, space)) == 0.0);
  auto uni = uniform_rum(space);
  for (std::size_t m = 0; m < space->menus().size(); ++m)
    for (double p : uni.row(m)) CHECK(p == doctest::Approx(1.0 / static_cast<double>(space->menus()[m].size())));
  CHECK_THROWS_AS(rum_from_measure({{r, 0.7}}, space), UsageError);
  CHECK_THROWS_AS(rum_from_measure({{r, 1.5}, {reverse(r), -0.5}}, space), UsageError);
}

TEST_CASE("polytope dimension") {
  CHECK(polytope_dimension(*test::fishing()) == 17);
  CHECK(polytope_dimension(*test::space_of({{0.0}, {1.0}, {2.0}, {3.0}}, MenuSpec::single_set())) == 3);
  auto pairs = ChoiceSpace::build(test::points({{0.0}, {1.0}, {2.0}}),
                                  MenuSpec::explicit_list({{"a1", "a2"}, {"a2", "a3"}, {"a1", "a3"}}));
  CHECK(polytope_dimension(*pairs) == 3);
}

TEST_CASE("three-alternative certificate values") {
  auto space = test::space_of({{0.0}, {1.0}, {2.0}});
  auto c = adjacency_certificate(Ranking::parse("123", 3), space);
  CHECK(entry(c, *space, {0, 1}, 0) == 1.0);
  CHECK(entry(c, *space, {1, 2}, 1) == -2.0);
  CHECK(entry(c, *space, {0, 2}, 0) == 1.0);
  CHECK(entry(c, *space, {0, 1, 2}, 1) == 3.0);
  CHECK(dot_vertex({0, 1, 2}, *space, c.t) == 0.0);
  CHECK(dot_vertex({2, 1, 0}, *space, c.t) == 0.0);
  // The other four rankings, evaluated independently.
  CHECK(dot_vertex({0, 2, 1}, *space, c.t) == 2.0);
  CHECK(dot_vertex({1, 0, 2}, *space, c.t) == 2.0);
  CHECK(dot_vertex({1, 2, 0}, *space, c.t) == 1.0);
  CHECK(dot_vertex({2, 0, 1}, *space, c.t) == 1.0);
  CHECK(c.margin == doctest::Approx(1.0));
}

TEST_CASE("certificates separate every edge of the fishing polytope") {
  auto space = test::fishing();
  for (const auto& r : enumerate_rankings(*space)) {
    auto c = adjacency_certificate(r, space);
    const double level = dot_vertex(r.order(), *space, c.t);
    CHECK(dot_vertex(reverse(r).order(), *space, c.t) == doctest::Approx(level).epsilon(1e-12));
    double worst = 1e300;
    for (const auto& s : enumerate_rankings(*space)) {
      if (s == r || s == reverse(r)) continue;
      worst = std::min(worst, dot_vertex(s.order(), *space, c.t) - level);
    }
    CHECK(worst > 1e-6);
  }
}

TEST_CASE("certificates need a rich space") {
  auto single = test::space_of({{0.0}, {1.0}, {2.0}}, MenuSpec::single_set());
  CHECK_THROWS_AS(adjacency_certificate(Ranking::parse("123", 3), single), UsageError);
  CHECK_THROWS_AS(adjacency_certificate(Ranking::parse("12", 2), test::space_of({{0.0}, {1.0}})), UsageError);
}
