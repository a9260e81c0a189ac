#include "brd/dynamics.hpp"
#include "brd/errors.hpp"
#include "brd/fixtures.hpp"
#include "brd/oracle.hpp"
#include "brd/rules.hpp"
#include "brd/scheduling.hpp"

#include "../generators.hpp"
#include "doctest.h"

#include <algorithm>

using namespace brd;
using namespace brd::testing;

namespace {

// Prefers the shortest job.
class ShortestJobRule final : public LocalRule {
 public:
  std::string name() const override { return "shortest-job"; }
  bool accepts(const Game& game) const override { return game.is_scheduling(); }
  int compare(const StateVector& a, const StateVector& b) const override {
    const Rational& x = std::get<SchedStateVector>(a).length;
    const Rational& y = std::get<SchedStateVector>(b).length;
    return x < y ? 1 : (x > y ? -1 : 0);
  }
  std::unique_ptr<DeviatorRule> clone() const override { return std::make_unique<ShortestJobRule>(*this); }
};

// Always names player 1, suboptimal or not.
class FirstPlayerRule final : public DeviatorRule {
 public:
  std::string name() const override { return "first-player"; }
  bool is_local() const override { return false; }
  bool accepts(const Game&) const override { return true; }
  std::vector<int> choose(const RuleInput&) const override { return {0}; }
  std::unique_ptr<DeviatorRule> clone() const override { return std::make_unique<FirstPlayerRule>(*this); }
};

// Claims equilibrium everywhere.
class IdleRule final : public DeviatorRule {
 public:
  std::string name() const override { return "idle"; }
  bool is_local() const override { return false; }
  bool accepts(const Game&) const override { return true; }
  std::vector<int> choose(const RuleInput&) const override { return {}; }
  std::unique_ptr<DeviatorRule> clone() const override { return std::make_unique<IdleRule>(*this); }
};

std::vector<int> second_highest_cost(const std::vector<StateVector>& vectors) {
  if (vectors.size() < 2) return {0};
  std::vector<int> idx(vectors.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<int>(k);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return current_cost_of(vectors[a]) > current_cost_of(vectors[b]); });
  return {idx[1]};
}

NfgStateVector cost_vector(int cost) { return NfgStateVector{cost, cost, 0, 0, std::nullopt}; }

std::vector<NetworkGame> small_games(Rng& rng, int count) {
  std::vector<NetworkGame> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(k % 2 ? random_symmetric_nfg(rng, 4, 6) : random_spp_instance(rng, 4, 3, 3, proper_intervals).game);
  }
  return out;
}

}  // namespace

TEST_SUITE("dynamics-engine") {
  TEST_CASE("an equilibrium start gives an empty trace") {
    Network net = parallel_edges({Rational(1), Rational(2)});
    NetworkGame ng = make_network_game(net, {PlayerSpec{net.source, net.sink, 1}}, false);
    Trace t = run_brd(ng.game, Profile{0}, MaxCostRule{});
    CHECK(t.moves.empty());
    CHECK(t.terminal_is_nash);
    CHECK(t.terminal == Profile{0});
  }

  TEST_CASE("max-cost on the three-edge instance") {
    Fixture f = fig2_maxcost(5, Rational(1, 100));
    Trace t = run_brd(f.game, f.initial, MaxCostRule{});
    CHECK(t.moves.size() == 1);
    CHECK(t.moves.front().player == 0);
    CHECK(social_cost(f.game, t.terminal) == Rational(99, 100));
    CHECK(verify_trace(f.game, t).empty());
  }

  TEST_CASE("draining the small machines of the activation-cost instance") {
    Fixture f = appB_coco(27);
    ReachabilityGraph graph(f.game, f.initial);
    const auto& costs = graph.equilibrium_costs();
    auto it = std::find(costs.begin(), costs.end(), Rational(39, 2));
    REQUIRE(it != costs.end());
    const Profile& eq = graph.equilibria()[it - costs.begin()];
    Trace w = graph.witness(eq);
    std::vector<std::pair<int, int>> script;
    for (const Move& mv : w.moves) script.emplace_back(mv.player, mv.to);
    Trace t = replay_moves(f.game, f.initial, script);
    CHECK(t.terminal_is_nash);
    CHECK(active_machine_count(f.game, t.terminal) == 2);
    CHECK(social_cost(f.game, t.terminal) == Rational(39, 2));
  }

  TEST_CASE("rule-reachable equilibria") {
    Rng rng(401);
    int games = 0;
    while (games < 40) {
      NetworkGame ng = random_symmetric_nfg(rng, 3, 5);
      auto all = all_profiles(ng.game);
      if (!br_tie_free(ng.game, all)) continue;
      ++games;
      for (std::size_t k = 0; k < all.size(); k += 3) {
        RuleReach reach = reachable_by_rule(ng.game, all[k], MinPathRule{});
        REQUIRE(reach.equilibria.size() == 1);
        CHECK(social_cost(ng.game, reach.equilibria[0]) == best_reachable(ng.game, all[k]).cost);
        Trace t = run_brd(ng.game, all[k], MaxCostRule{});
        RuleReach det = reachable_by_rule(ng.game, all[k], MaxCostRule{}, TiePolicy{});
        REQUIRE(det.equilibria.size() == 1);
        CHECK(det.equilibria[0] == canonical_profile(ng.game, t.terminal));
      }
    }
    FixturePair fig9 = fig9_sched_pair(4, Rational(1, 10));
    RuleReach reach = reachable_by_rule(fig9.a.game, fig9.a.initial, ShortestJobRule{});
    REQUIRE_FALSE(reach.equilibria.empty());
    for (const Profile& eq : reach.equilibria) CHECK(social_cost(fig9.a.game, eq) == Rational(39, 5));
  }

  TEST_CASE("rule equilibria are reachable equilibria") {
    Rng rng(402);
    for (const NetworkGame& ng : small_games(rng, 40)) {
      Profile p0 = random_profile(rng, ng.game);
      ReachabilityGraph graph(ng.game, p0);
      for (const auto& name : rule_names()) {
        auto rule = make_rule(name, 3);
        if (!rule->accepts(ng.game)) continue;
        for (const Profile& eq : reachable_by_rule(ng.game, p0, *rule).equilibria) CHECK(graph.contains_equilibrium(eq));
      }
    }
  }

  TEST_CASE("engine traces are best-response sequences with decreasing potential") {
    Rng rng(403);
    std::vector<Fixture> fixtures{fig2_maxcost(5, Rational(1, 100)), fig3_minpath_chain(4, Rational(1, 100)),
                                  fig4_minpath_exp(3), fig5_ep_pair(6).a, fig5_ep_pair(6).b, appB_coco(8)};
    std::vector<std::pair<Game, Profile>> cases;
    for (const Fixture& f : fixtures) cases.emplace_back(f.game, f.initial);
    for (const NetworkGame& ng : small_games(rng, 30)) cases.emplace_back(ng.game, random_profile(rng, ng.game));
    for (int k = 0; k < 20; ++k) {
      Game g = random_coco_game(rng, 20, 6, 4, 25);
      cases.emplace_back(g, random_profile(rng, g));
    }
    for (const auto& [g, p0] : cases) {
      for (const auto& name : rule_names()) {
        auto rule = make_rule(name, 11);
        if (!rule->accepts(g)) continue;
        Trace t = run_brd(g, p0, *rule);
        CHECK(t.terminal_is_nash);
        CHECK(is_nash(g, t.terminal));
        CHECK(verify_trace(g, t).empty());
        Profile p = t.initial;
        Rational phi = rosenthal_potential(g, p);
        for (const Move& mv : t.moves) {
          auto br = best_response(g, p, mv.player);
          CHECK(std::binary_search(br.begin(), br.end(), mv.to));
          CHECK(mv.cost_after < mv.cost_before);
          p = apply_move(p, mv.player, mv.to);
          Rational next = rosenthal_potential(g, p);
          CHECK(phi - next == mv.cost_before - mv.cost_after);
          phi = next;
        }
        CHECK(p == t.terminal);
      }
    }
  }

  TEST_CASE("engine errors") {
    Fixture f = fig2_maxcost(5, Rational(1, 100));
    Fixture f3 = fig3_minpath_chain(4, Rational(1, 100));
    CHECK_THROWS_AS(run_brd(f3.game, f3.initial, MaxCostRule{}, TiePolicy{}, 1), BudgetExceeded);
    CHECK_THROWS_AS(run_brd(f.game, f.initial, IdleRule{}), RuleViolation);
    Network net = parallel_edges({Rational(1), Rational(2)});
    NetworkGame two = make_network_game(net, std::vector<PlayerSpec>(2, PlayerSpec{net.source, net.sink, 1}), false);
    CHECK_FALSE(is_suboptimal(two.game, Profile{0, 1}, 0));
    CHECK_THROWS_AS(run_brd(two.game, Profile{0, 1}, FirstPlayerRule{}), RuleViolation);
    CHECK_THROWS_AS(run_brd(f.game, f.initial, LongestJobRule{}), UnsupportedModel);
    CHECK_THROWS_AS(run_brd(f.game, f.initial, MaxCostRule{}, TiePolicy{RuleTie::BranchAll, BrTie::Preferred}),
                    InvalidInput);
    CHECK_THROWS_AS(replay_moves(f.game, f.initial, {{1, f.initial[0]}}), RuleViolation);
  }

  TEST_CASE("verify_trace rejects altered traces") {
    Fixture f = fig3_minpath_chain(4, Rational(1, 100));
    Trace t = run_brd(f.game, f.initial, MinPathRule{});
    REQUIRE(t.moves.size() >= 2);
    CHECK(verify_trace(f.game, t).empty());
    Trace swapped = t;
    std::swap(swapped.moves[0], swapped.moves[1]);
    CHECK_FALSE(verify_trace(f.game, swapped).empty());
    Trace cut = t;
    cut.moves.pop_back();
    CHECK_FALSE(verify_trace(f.game, cut).empty());
    Trace costly = t;
    costly.moves[0].cost_after += 1;
    CHECK_FALSE(verify_trace(f.game, costly).empty());
  }

  TEST_CASE("the random rule replays under its seed") {
    Fixture f = fig4_minpath_exp(3);
    Trace a = run_brd(f.game, f.initial, RandomRule(42));
    Trace b = run_brd(f.game, f.initial, RandomRule(42));
    REQUIRE(a.moves.size() == b.moves.size());
    for (std::size_t k = 0; k < a.moves.size(); ++k) CHECK(a.moves[k].player == b.moves[k].player);
  }

  TEST_CASE("check_iip") {
    const StateVector a = cost_vector(3), b = cost_vector(2), c = cost_vector(4);
    auto found = check_iip(second_highest_cost, {{a, b}, {a, b, c}});
    CHECK_FALSE(found.empty());

    Rng rng(404);
    std::vector<StateVector> pool;
    for (int q = 0; q < 8; ++q) pool.push_back(random_nfg_vector(rng, false));
    auto profiles = random_vector_profiles(rng, pool, 46);
    CHECK_FALSE(check_iip(second_highest_cost, profiles).empty());
    for (const auto& name : {"max-cost", "min-path", "max-improvement"}) {
      auto rule = make_rule(name);
      CHECK(check_iip(dynamic_cast<const LocalRule&>(*rule), profiles).empty());
    }
  }
}
