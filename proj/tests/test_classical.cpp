#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "jsp/jsp.hpp"
#include "oracle.hpp"

using namespace jsp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<std::size_t> ids(const JspInstance& inst, std::initializer_list<const char*> names) {
  std::vector<std::size_t> out;
  for (auto n : names) out.push_back(*inst.find(n));
  return out;
}

JspInstance toy(std::size_t n, double t_max, double priority) {
  auto inst = oracle::random_instance(n, 5, t_max);
  for (auto& p : inst.places) p.priority = priority;
  return inst;
}

}  // namespace

TEST_CASE("route_stats") {
  const auto inst = oracle::fixture();
  CHECK(route_stats(inst, ids(inst, {"Lórien", "Pelargir", "Minas_Tirith", "Edoras", "Isengard"}))
            .p_tot == 480);
  CHECK(route_stats(inst, ids(inst, {"Bree", "Lórien", "Minas_Tirith", "Pelargir", "Edoras"}))
            .p_tot == 460);

  const auto tharbad = route_stats(inst, ids(inst, {"Tharbad"}));
  CHECK(tharbad.p_tot == 5);
  CHECK_THAT(tharbad.t_tot, WithinRel((90.0 + 90.0) / 9.6 + 2, 1e-12));
  CHECK_THAT(tharbad.t_tot, WithinRel(20.75, 1e-12));

  const std::vector<std::size_t> dup{1, 1};
  CHECK_THROWS_AS(route_stats(inst, dup), std::invalid_argument);
  CHECK_THROWS_AS(route_stats(inst, std::vector<std::size_t>{}), std::invalid_argument);
}

TEST_CASE("count_routes") {
  CHECK(count_routes(9, 6) == 60480);
  CHECK(count_routes(9, 0) == 1);
  CHECK(count_routes(9, 4) == 3024);
  CHECK(count_routes(9, 9) == 362880);
  CHECK_THROWS_AS(count_routes(9, 10), std::invalid_argument);
}

TEST_CASE("expected_hits") {
  CHECK_THAT(expected_hits(10000, 8, 9, 4), WithinAbs(26.455, 5e-4));
  CHECK_THAT(expected_hits(10000, 12, 9, 6), WithinAbs(1.984, 5e-4));
  CHECK(expected_hits(10000, 0, 9, 5) == 0.0);
  CHECK_THROWS_AS(expected_hits(10000, 1, 9, 10), std::invalid_argument);
}

TEST_CASE("exhaustive_search on the fixture matches the brute-force baseline") {
  const auto inst = oracle::fixture();
  const auto c = derive_coefficients(inst);

  struct Pinned {
    std::size_t xi;
    double best;  // < 0: none feasible
    std::size_t count;
  };
  // frozen from tests/oracles/middle_earth_baseline.py at v = 9.6
  const Pinned pinned[] = {{4, 445, 8}, {5, 480, 2}, {6, 465, 2}, {7, -1, 0}, {8, -1, 0}};

  for (const auto& p : pinned) {
    CAPTURE(p.xi);
    const auto rep = exhaustive_search(inst, p.xi);
    CHECK(rep.routes_checked == count_routes(9, p.xi));
    CHECK(rep.optima_count() == p.count);
    if (p.best < 0) {
      CHECK_FALSE(rep.best_priority);
    } else {
      REQUIRE(rep.best_priority);
      CHECK(*rep.best_priority == p.best);
    }

    // second, independent pass
    const auto rows = oracle::all_routes(inst, c, p.xi);
    double best = -1;
    for (const auto& r : rows)
      if (r.t <= inst.t_max) best = std::max(best, r.p);
    std::set<std::vector<std::size_t>> expected, got;
    for (const auto& r : rows)
      if (r.t <= inst.t_max && r.p == best) expected.insert(r.places);
    for (const auto& o : rep.optima) {
      got.insert(o.places);
      CHECK(o.t_tot <= inst.t_max);
      CHECK(o.p_tot == *rep.best_priority);
    }
    CHECK(got == expected);
    CHECK(got.size() == rep.optima_count());
    CHECK(rep.optima_count() % 2 == 0);
  }
}

TEST_CASE("the 495-priority place set cannot be done within 100 days at 9.6 leagues a day") {
  const auto inst = oracle::fixture();
  auto route = ids(inst, {"Valle", "Isengard", "Edoras", "Pelargir", "Minas_Tirith", "Lórien"});
  CHECK(route_stats(inst, route).p_tot == 495);
  CHECK_THAT(route_stats(inst, route).t_tot, WithinRel(135.75, 1e-12));
  std::sort(route.begin(), route.end());
  double fastest = 1e300;
  do fastest = std::min(fastest, route_stats(inst, route).t_tot);
  while (std::next_permutation(route.begin(), route.end()));
  CHECK(fastest > inst.t_max);
  CHECK_THAT(fastest, WithinRel(126.58333333333334, 1e-12));
}

TEST_CASE("exhaustive_search invariants") {
  const auto inst = oracle::fixture();
  SECTION("reversal closure of the optima") {
    for (std::size_t xi = 3; xi <= 6; ++xi) {
      const auto rep = exhaustive_search(inst, xi);
      std::set<std::vector<std::size_t>> opt;
      for (const auto& o : rep.optima) opt.insert(o.places);
      for (auto r : opt) {
        std::reverse(r.begin(), r.end());
        CHECK(opt.count(r) == 1);
      }
    }
  }
  SECTION("worker count does not change the report") {
    const auto one = exhaustive_search(inst, 5, 1);
    const auto four = exhaustive_search(inst, 5, 4);
    CHECK(one.optima == four.optima);
    CHECK(one.best_priority == four.best_priority);
    CHECK(one.routes_checked == four.routes_checked);
  }
  SECTION("all permutations are optimal on a symmetric toy") {
    const auto rep = exhaustive_search(toy(3, 1e9, 10), 3);
    CHECK(rep.optima_count() == 6);
    CHECK(rep.best_priority == 30);
  }
}

TEST_CASE("random_sample_search") {
  const auto inst = oracle::fixture();

  SECTION("xi = 5 hit count sits in the Poisson 99% band of its expectation") {
    const auto rep = random_sample_search(inst, 5, 10000, 1);
    CHECK_THAT(rep.expected, WithinRel(1.3227513227513228, 1e-12));
    // scipy.stats.poisson.ppf(0.005 / 0.995, 1.32275) -> [0, 5]
    CHECK(rep.found_optimal <= 5);
    CHECK(rep.found_optimal <= rep.reads);
    REQUIRE(rep.best_found);
    CHECK(rep.best_found->t_tot <= inst.t_max);
  }
  SECTION("nothing is feasible at xi = 8") {
    const auto rep = random_sample_search(inst, 8, 10000, 1);
    CHECK(rep.found_optimal == 0);
    CHECK(rep.expected == 0.0);
    CHECK_FALSE(rep.best_found);
  }
  SECTION("same seed gives the same report regardless of workers") {
    const auto known = exhaustive_search(inst, 4);
    const auto a = random_sample_search(inst, 4, 3000, 99, known, 1);
    const auto b = random_sample_search(inst, 4, 3000, 99, known, 1);
    const auto c = random_sample_search(inst, 4, 3000, 99, known, 8);
    CHECK(a == b);
    CHECK(a == c);
    const auto d = random_sample_search(inst, 4, 3000, 100, known, 1);
    CHECK_FALSE(a == d);
  }
  SECTION("mean over 30 seeds agrees with the expected-hit formula") {
    const auto known = exhaustive_search(inst, 4);
    const double r = 10000;
    const double p = 8.0 / 3024.0;
    const double sigma = std::sqrt(r * p * (1 - p));
    double sum = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed)
      sum += static_cast<double>(random_sample_search(inst, 4, 10000, 1000 + seed, known).found_optimal);
    const double mean = sum / 30;
    CHECK(std::abs(mean - expected_hits(r, 8, 9, 4)) <= 3 * sigma / std::sqrt(30.0));
  }
  SECTION("bad arguments") {
    CHECK_THROWS_AS(random_sample_search(inst, 4, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_sample_search(inst, 5, 10, 1, exhaustive_search(inst, 4)),
                    std::invalid_argument);
  }
}

TEST_CASE("greedy_guess") {
  const auto inst = oracle::fixture();
  const auto g = greedy_guess(inst);
  CHECK(g.size() >= 4);
  CHECK(g.size() <= 7);
  CHECK(g.t_tot <= inst.t_max);
  CHECK(g == route_stats(inst, g.places));

  auto broke = inst;
  broke.t_max = 0;
  CHECK(greedy_guess(broke).size() == 0);

  const auto single = toy(1, 1000, 3);
  const auto one = greedy_guess(single);
  REQUIRE(one.size() == 1);
  CHECK(one.places[0] == 0);
}
