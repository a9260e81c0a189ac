#pragma once

#include "brd/dynamics.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace brd {

struct OracleOptions {
  std::size_t state_limit = kDefaultStateLimit;
  int jobs = 1;  // worker threads; results do not depend on this
};

// Exhaustive search over every best-response sequence from p0. Players that
// are interchangeable (same weight and strategy list) are merged, so profiles
// are kept in canonical form.
class ReachabilityGraph {
 public:
  ReachabilityGraph(const Game& game, const Profile& p0, OracleOptions options = {});

  const Game& game() const { return *game_; }
  const Profile& initial() const { return p0_; }
  std::size_t states_visited() const { return nodes_.size(); }
  const std::vector<Profile>& states() const { return profiles_; }  // canonical, discovery order
  // Canonical equilibria, ascending, with their social costs.
  const std::vector<Profile>& equilibria() const { return equilibria_; }
  const std::vector<Cost>& equilibrium_costs() const { return costs_; }
  bool contains_equilibrium(const Profile& profile) const;  // profile in any form
  // A best-response sequence from p0 (actual player ids) reaching the given equilibrium.
  Trace witness(const Profile& canonical_equilibrium) const;

 private:
  struct Node {
    int parent;
    int player;  // representative in the parent's canonical profile
    int from;
    int to;
  };
  const Game* game_;
  Profile p0_;
  std::vector<Profile> profiles_;
  std::vector<Node> nodes_;
  std::vector<Profile> equilibria_;
  std::vector<Cost> costs_;
  std::vector<int> equilibrium_nodes_;
};

ReachabilityGraph reachable_ne(const Game& game, const Profile& p0, OracleOptions options = {});

// Lower bound on the social cost of every profile: the cheapest strategy of any
// player for summed costs, the heaviest job or the average load for makespan.
// nullopt for the conflicting model.
std::optional<Cost> social_cost_floor(const Game& game);

struct BestReachable {
  Profile equilibrium;  // canonical
  Cost cost;
  Trace witness;
  // True when an equilibrium at the social cost floor was found without the
  // full search; otherwise the search was exhaustive.
  bool certified_by_floor = false;
};

// Minimum social cost over reachable equilibria. Probes each first move
// followed by lowest-id completion; a probe ending at the social cost floor is
// optimal. Otherwise the full graph is searched and ties go to the smallest
// canonical encoding.
BestReachable best_reachable(const Game& game, const Profile& p0, OracleOptions options = {});

Trace optimal_sequence(const Game& game, const Profile& p0, OracleOptions options = {});

struct InefficiencyReport {
  std::string game_id;
  Profile initial;
  std::string rule;
  Cost worst_rule_cost;  // max social cost over equilibria reachable under the rule
  Cost best_cost;        // social cost of the best reachable equilibrium
  Rational alpha;
  // Over all reachable equilibria; empty when the full search exceeded the
  // state limit and the best cost was certified by the social cost floor.
  std::optional<Cost> max_equilibrium_cost;
  std::optional<Cost> min_equilibrium_cost;
  Trace worst_witness;
  Trace best_witness;
  std::vector<Profile> rule_equilibria;  // canonical
  std::size_t oracle_states = 0;
  std::size_t rule_states = 0;
};

InefficiencyReport rule_inefficiency(const Game& game, const Profile& p0, const DeviatorRule& rule,
                                     OracleOptions options = {}, const std::string& game_id = "");

// Every profile of the game in lexicographic order; throws BudgetExceeded when
// the count exceeds the guard.
std::vector<Profile> all_profiles(const Game& game, std::size_t guard = 100000);

// Maximum inefficiency over the supplied initial profiles.
Rational game_inefficiency(const Game& game, const DeviatorRule& rule, const std::vector<Profile>& initial_profiles,
                           OracleOptions options = {});

// Runs fn(i) for i in [0, count) on up to jobs threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace brd
