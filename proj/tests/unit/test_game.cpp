#include "brd/dynamics.hpp"
#include "brd/errors.hpp"
#include "brd/fixtures.hpp"
#include "brd/game.hpp"
#include "brd/network.hpp"
#include "brd/scheduling.hpp"

#include "../generators.hpp"
#include "doctest.h"

#include <algorithm>

using namespace brd;
using namespace brd::testing;

namespace {

NetworkGame parallel_game(const std::vector<Rational>& costs, int players) {
  Network net = parallel_edges(costs);
  return make_network_game(net, std::vector<PlayerSpec>(players, PlayerSpec{net.source, net.sink, 1}), false);
}

std::vector<Game> random_unweighted_games(Rng& rng, int count) {
  std::vector<Game> games;
  for (int k = 0; k < count; ++k) {
    switch (k % 3) {
      case 0:
        games.push_back(random_symmetric_nfg(rng, 4, 6).game);
        break;
      case 1:
        games.push_back(random_spp_instance(rng, 4, 3, 3, proper_intervals).game.game);
        break;
      default:
        games.push_back(random_coco_game(rng, 8, 4, 4, 25));
        break;
    }
  }
  return games;
}

}  // namespace

TEST_SUITE("game-core") {
  TEST_CASE("fair share splits an edge evenly") {
    NetworkGame ng = parallel_game({Rational(6)}, 2);
    Profile p{0, 0};
    CHECK(player_cost(ng.game, p, 0) == 3);
    CHECK(player_cost(ng.game, p, 1) == 3);
    CHECK(social_cost(ng.game, p) == 6);
  }

  TEST_CASE("weighted share of the heavy player joining six unit players") {
    const Rational eps(1, 1000);
    Fixture f = fig6_weighted_partition({Rational(1, 2), Rational(1, 2)}, eps, 100);
    const int e3 = strategy_from_edge_ids(*f.network, 0, {3});
    LoadMap loads = compute_loads(f.game, f.initial);
    CHECK(deviation_cost(f.game, f.initial, loads, 0, e3) == 2 * (9 + eps) / 8);
    CHECK(player_cost(f.game, apply_move(f.initial, 0, e3), 0) == 2 * (9 + eps) / 8);
  }

  TEST_CASE("conflicting congestion cost") {
    Game g = make_coco_game(4, 9, 27);
    Profile p(9, 0);
    CHECK(player_cost(g, p, 0) == 12);
    CHECK(conflict_cost(9, 27) == 12);
  }

  TEST_CASE("social cost kinds") {
    Game g = make_linear_sched_game(2, {Rational(2), Rational(3), Rational(3)});
    CHECK(social_cost(g, sched_profile(g, {0, 0, 1})) == 5);
    Fixture f = fig4_minpath_exp(3);
    Profile opt = f.initial;
    for (int i = 3; i < f.game.num_players(); ++i) opt[i] = strategy_from_edge_ids(*f.network, i, {1, 3, 5});
    CHECK(social_cost(f.game, opt) == 14);
    CHECK(is_nash(f.game, opt));
  }

  TEST_CASE("fair-share social cost equals the cost of used edges") {
    Rng rng(101);
    for (int k = 0; k < 60; ++k) {
      NetworkGame ng = k % 2 ? random_symmetric_nfg(rng, 4, 6) : random_spp_instance(rng, 4, 3, 3, proper_intervals).game;
      for (int q = 0; q < 10; ++q) {
        Profile p = random_profile(rng, ng.game);
        LoadMap loads = compute_loads(ng.game, p);
        Rational used = 0;
        for (int e = 0; e < ng.game.num_resources(); ++e) {
          if (loads.count[e] > 0) used += ng.game.resource_cost[e];
        }
        CHECK(social_cost(ng.game, p) == used);
      }
    }
  }

  TEST_CASE("best response examples") {
    NetworkGame ng = parallel_game({Rational(1), Rational(2)}, 1);
    CHECK(best_response(ng.game, Profile{1}, 0) == std::vector<int>{0});
    CHECK(is_suboptimal(ng.game, Profile{1}, 0));
    CHECK_FALSE(is_suboptimal(ng.game, Profile{0}, 0));

    Fixture f2 = fig2_maxcost(5, Rational(1, 100));
    auto br = best_response(f2.game, f2.initial, 0);
    REQUIRE(br.size() == 1);
    CHECK(edge_ids_of(*f2.network, 0, br[0]) == std::vector<int>{3});
    CHECK(player_cost(f2.game, apply_move(f2.initial, 0, br[0]), 0) == Rational(99, 500));
    CHECK(is_suboptimal(f2.game, f2.initial, 0));
    CHECK_FALSE(is_nash(f2.game, f2.initial));

    Game g = make_coco_game(4, 36, 27);
    std::vector<int> machines;
    for (int j = 0; j < 3; ++j) machines.insert(machines.end(), 3, j);
    machines.insert(machines.end(), 27, 3);
    Profile p = sched_profile(g, machines);
    CHECK(best_response(g, p, 35) == std::vector<int>{0, 1, 2});
    CHECK(deviation_cost(g, p, compute_loads(g, p), 35, 0) == Rational(43, 4));
  }

  TEST_CASE("indifferent players are not suboptimal") {
    NetworkGame ng = parallel_game({Rational(2), Rational(2)}, 1);
    CHECK(best_response(ng.game, Profile{0}, 0) == std::vector<int>{0, 1});
    CHECK_FALSE(is_suboptimal(ng.game, Profile{0}, 0));
    CHECK(is_nash(ng.game, Profile{0}));
  }

  TEST_CASE("nash examples") {
    NetworkGame ng = parallel_game({Rational(5)}, 3);
    CHECK(is_nash(ng.game, Profile{0, 0, 0}));
    Game g = make_coco_game(4, 36, 27);
    std::vector<int> machines;
    for (int j = 0; j < 4; ++j) machines.insert(machines.end(), 9, j);
    CHECK(is_nash(g, sched_profile(g, machines)));
  }

  TEST_CASE("potential examples") {
    NetworkGame ng = parallel_game({Rational(6), Rational(1)}, 2);
    CHECK(rosenthal_potential(ng.game, Profile{0, 0}) == 9);
    Game g = make_linear_sched_game(2, {Rational(1), Rational(1), Rational(1)});
    CHECK(rosenthal_potential(g, sched_profile(g, {0, 0, 1})) == 4);
    Fixture f6 = fig6_weighted_partition({Rational(1, 2), Rational(1, 2)}, Rational(1, 1000), 100);
    CHECK_THROWS_AS(rosenthal_potential(f6.game, f6.initial), UnsupportedModel);
  }

  TEST_CASE("potential mirrors every unilateral deviation") {
    Rng rng(102);
    for (const Game& g : random_unweighted_games(rng, 45)) {
      for (int q = 0; q < 6; ++q) {
        Profile p = random_profile(rng, g);
        Rational phi = rosenthal_potential(g, p);
        for (int i = 0; i < g.num_players(); ++i) {
          for (int s = 0; s < static_cast<int>(g.strategies[i].size()); ++s) {
            Profile next = apply_move(p, i, s);
            CHECK(rosenthal_potential(g, next) - phi == player_cost(g, next, i) - player_cost(g, p, i));
          }
        }
      }
    }
  }

  TEST_CASE("best-response sets and the nash test agree with brute force") {
    Rng rng(103);
    for (const Game& g : random_unweighted_games(rng, 45)) {
      for (int q = 0; q < 6; ++q) {
        Profile p = random_profile(rng, g);
        LoadMap loads = compute_loads(g, p);
        bool all_best = true;
        for (int i = 0; i < g.num_players(); ++i) {
          auto br = best_response(g, p, i);
          REQUIRE_FALSE(br.empty());
          Cost best = deviation_cost(g, p, loads, i, br.front());
          for (int s = 0; s < static_cast<int>(g.strategies[i].size()); ++s) {
            Cost c = deviation_cost(g, p, loads, i, s);
            CHECK(best <= c);
            CHECK((c == best) == std::binary_search(br.begin(), br.end(), s));
          }
          if (player_cost(g, p, i) != best) all_best = false;
          CHECK(is_suboptimal(g, p, i) == (player_cost(g, p, i) != best));
        }
        CHECK(is_nash(g, p) == all_best);
      }
    }
  }

  TEST_CASE("validation") {
    NetworkGame ng = parallel_game({Rational(1), Rational(2)}, 2);
    CHECK_THROWS_AS(validate_profile(ng.game, Profile{0}), InvalidInput);
    CHECK_THROWS_AS(validate_profile(ng.game, Profile{0, 2}), InvalidInput);
    CHECK_THROWS_AS(make_coco_game(2, 3, 0), InvalidInput);
    CHECK_THROWS_AS(make_linear_sched_game(0, {Rational(1)}), InvalidInput);
  }

  TEST_CASE("canonical profiles merge identical players") {
    NetworkGame ng = parallel_game({Rational(1), Rational(2), Rational(3)}, 3);
    CHECK(canonical_profile(ng.game, Profile{2, 0, 1}) == canonical_profile(ng.game, Profile{0, 1, 2}));
    CHECK(profile_hash(Profile{0, 1}) != profile_hash(Profile{1, 0}));
  }

  TEST_CASE("rational parsing") {
    CHECK(parse_rational("7.4") == Rational(37, 5));
    CHECK(parse_rational("-3/6") == Rational(-1, 2));
    CHECK(to_string(Rational(4)) == "4/1");
    CHECK_THROWS_AS(parse_rational("1/0"), InvalidInput);
    CHECK_THROWS_AS(parse_rational("abc"), InvalidInput);
  }
}
