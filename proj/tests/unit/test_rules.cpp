#include "brd/dynamics.hpp"
#include "brd/errors.hpp"
#include "brd/fixtures.hpp"
#include "brd/oracle.hpp"
#include "brd/rules.hpp"
#include "brd/scheduling.hpp"

#include "../generators.hpp"
#include "doctest.h"

#include <algorithm>
#include <numeric>

using namespace brd;
using namespace brd::testing;

namespace {

// Players the rule selects at the profile (actual ids).
std::vector<int> choice(const DeviatorRule& rule, const Game& g, const Profile& p) {
  std::vector<int> sub = suboptimal_players(g, p);
  std::vector<StateVector> vectors;
  for (int i : sub) vectors.push_back(state_vector(g, p, i));
  return rule.choose(RuleInput{g, p, sub, vectors});
}

Profile from_loads(const Game& g, const std::vector<int>& loads) {
  std::vector<int> machine;
  for (int j = 0; j < static_cast<int>(loads.size()); ++j) machine.insert(machine.end(), loads[j], j);
  return sched_profile(g, machine);
}

}  // namespace

TEST_SUITE("rules") {
  TEST_CASE("max-cost") {
    Fixture f = fig2_maxcost(5, Rational(1, 100));
    CHECK(choice(MaxCostRule{}, f.game, f.initial) == std::vector<int>{0});
    std::vector<StateVector> equal(3, StateVector{NfgStateVector{2, 2, 1, 1, std::nullopt}});
    CHECK(MaxCostRule{}.choose_vectors(equal) == std::vector<int>{0, 1, 2});
    Fixture a = fig9_sched_pair(4, Rational(1, 10)).a;
    CHECK(MaxCostRule{}.compare(state_vector(a.game, a.initial, 0), state_vector(a.game, a.initial, 4)) > 0);
  }

  TEST_CASE("min-path") {
    Fixture f = fig2_maxcost(5, Rational(1, 100));
    CHECK(choice(MinPathRule{}, f.game, f.initial) == std::vector<int>{1, 2, 3, 4});
    CHECK(social_cost(f.game, run_brd(f.game, f.initial, MinPathRule{}).terminal) == Rational(1, 5));
    Fixture f3 = fig3_minpath_chain(4, Rational(1, 100));
    CHECK(choice(MinPathRule{}, f3.game, f3.initial) == std::vector<int>{0});
    Fixture f4 = fig4_minpath_exp(3);
    Trace t = run_brd(f4.game, f4.initial, MinPathRule{});
    REQUIRE(t.moves.size() >= 3);
    for (int i = 0; i < 3; ++i) CHECK(t.moves[i].player == i);
    CHECK(MinPathRule{}.accepts(f.game));
    CHECK_FALSE(MinPathRule{}.accepts(make_coco_game(2, 2, 4)));
  }

  TEST_CASE("max-improvement, longest-job, round-robin and random") {
    StateVector idle = NfgStateVector{3, 3, 3, 3, std::nullopt};
    StateVector gain = NfgStateVector{3, 3, 2, 3, std::nullopt};
    CHECK(MaxImprovementRule{}.choose_vectors({idle, gain}) == std::vector<int>{1});

    Fixture b = fig9_sched_pair(4, Rational(1, 10)).b;
    CHECK(choice(LongestJobRule{}, b.game, b.initial) == std::vector<int>{1});

    Fixture f4 = fig4_minpath_exp(3);
    RoundRobinRule rr;
    auto sub = suboptimal_players(f4.game, f4.initial);
    CHECK(choice(rr, f4.game, f4.initial) == std::vector<int>{sub.front()});
    rr.on_move(sub.front());
    auto next = choice(rr, f4.game, f4.initial);
    REQUIRE(next.size() == 1);
    CHECK(next[0] == *std::upper_bound(sub.begin(), sub.end(), sub.front()));

    RandomRule r1(9), r2(9);
    for (int k = 0; k < 20; ++k) {
      auto c1 = choice(r1, f4.game, f4.initial);
      CHECK(c1 == choice(r2, f4.game, f4.initial));
      REQUIRE(c1.size() == 1);
      CHECK(std::binary_search(sub.begin(), sub.end(), c1[0]));
      r1.on_move(c1[0]);
      r2.on_move(c1[0]);
    }
  }

  TEST_CASE("s-opt rule") {
    Game g = make_coco_game(4, 36, 27);
    Profile p = from_loads(g, {3, 3, 3, 27});
    CHECK(choice(SOptRule{}, g, p) == std::vector<int>{9});
    CHECK(choice(SOptRule{}, g, from_loads(g, {9, 9, 9, 9})).empty());
    Game small = make_coco_game(2, 4, 27);
    CHECK(choice(SOptRule{}, small, from_loads(small, {2, 2})) == std::vector<int>{0});
    CHECK_FALSE(SOptRule{}.accepts(make_linear_sched_game(2, {Rational(1)})));
    Rng rng(501);
    for (int k = 0; k < 200; ++k) {
      Game c = random_coco_game(rng, 20, 6, 4, 25);
      Profile q = random_profile(rng, c);
      auto machine = s_opt_choose(c, q);
      auto chosen = choice(SOptRule{}, c, q);
      if (!machine) {
        CHECK(chosen.empty());
        continue;
      }
      REQUIRE(chosen.size() == 1);
      CHECK(q[chosen[0]] == *machine);
      CHECK(std::find(q.begin(), q.end(), *machine) - q.begin() == chosen[0]);
    }
  }

  TEST_CASE("local rules depend only on state vectors") {
    Rng rng(502);
    std::vector<StateVector> nfg, sched;
    for (int q = 0; q < 10; ++q) nfg.push_back(random_nfg_vector(rng, q % 2 == 1));
    Game g = make_coco_game(4, 12, 10);
    Profile p = random_profile(rng, g);
    for (int i = 0; i < g.num_players(); ++i) sched.push_back(state_vector(g, p, i));
    for (const auto& name : rule_names()) {
      auto rule = make_rule(name);
      auto* local = dynamic_cast<LocalRule*>(rule.get());
      if (!local) continue;
      const auto& pool = name == "s-opt" || name == "longest-job" ? sched : nfg;
      std::unique_ptr<LocalRule> fixed = name == "s-opt" ? std::make_unique<SOptRule>(10) : nullptr;
      const LocalRule& r = fixed ? *fixed : *local;
      for (int k = 0; k < 100; ++k) {
        std::vector<StateVector> vs;
        for (int q = uniform(rng, 1, 6); q > 0; --q) vs.push_back(pool[uniform(rng, 0, static_cast<int>(pool.size()) - 1)]);
        std::vector<int> perm(vs.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<StateVector> permuted;
        for (int q : perm) permuted.push_back(vs[q]);
        std::vector<int> base = r.choose_vectors(vs), moved;
        for (int q : r.choose_vectors(permuted)) moved.push_back(perm[q]);
        std::sort(moved.begin(), moved.end());
        CHECK(base == moved);
      }
    }
  }

  TEST_CASE("min-path is optimal on symmetric games without best-response ties") {
    Rng rng(503);
    int games = 0;
    while (games < 40) {
      NetworkGame ng = random_symmetric_nfg(rng, 3, 5);
      auto all = all_profiles(ng.game);
      if (!br_tie_free(ng.game, all)) continue;
      ++games;
      for (const Profile& p0 : all) {
        CHECK(social_cost(ng.game, run_brd(ng.game, p0, MinPathRule{}).terminal) == best_reachable(ng.game, p0).cost);
      }
    }
  }

  TEST_CASE("a best-response tie with unequal path costs defeats min-path") {
    // Parallel edges 20/7, 1, 6/5, 11/3, 2 with three players. A player on the
    // first edge can move to the free unit edge or share the edge of cost 2 at
    // the same price; only the first choice keeps the cheap equilibrium reachable.
    Network net = parallel_edges({Rational(20, 7), Rational(1), Rational(6, 5), Rational(11, 3), Rational(2)});
    NetworkGame ng = make_network_game(net, std::vector<PlayerSpec>(3, PlayerSpec{net.source, net.sink, 1}), false);
    Profile p0{0, 0, 4};
    auto br = best_response(ng.game, p0, 0);
    CHECK(br == std::vector<int>{1, 4});
    InefficiencyReport rep = rule_inefficiency(ng.game, p0, MinPathRule{});
    CHECK(rep.alpha == 2);
    CHECK(rep.best_cost == 1);
    CHECK(rep.worst_rule_cost == 2);
  }

  TEST_CASE("rule registry") {
    CHECK(rule_names().size() == 7);
    for (const auto& name : rule_names()) CHECK(make_rule(name)->name() == name);
    CHECK_THROWS_AS(make_rule("fastest"), InvalidInput);
    CHECK(make_rule("s-opt")->is_local());
    CHECK_FALSE(make_rule("round-robin")->is_local());
  }
}
