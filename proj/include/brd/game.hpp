#pragma once

#include "brd/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace brd {

using Cost = Rational;

enum class CostModel {
  FairShare,      // c_e / l_e per used edge
  WeightedShare,  // w_i * c_e / W_e per used edge
  LinearLoad,     // load of the chosen machine
  Conflicting,    // L + B / L on the chosen machine, unit jobs
};

enum class SocialCostKind { Sum, Makespan };

// A strategy is a non-empty, strictly increasing list of resource indices.
using Strategy = std::vector<int>;

// Assignment of one strategy index (into the player's strategy list) per player.
using Profile = std::vector<int>;

struct Game {
  CostModel model = CostModel::FairShare;
  SocialCostKind social_kind = SocialCostKind::Sum;
  std::vector<Rational> resource_cost;            // edge costs; unused for machines
  std::vector<Rational> weight;                   // per player; job length in scheduling
  std::vector<std::vector<Strategy>> strategies;  // per player
  Rational activation_cost = 0;                   // B, conflicting model only
  // Players with identical weight and identical strategy lists share a class.
  std::vector<int> player_class;

  int num_players() const { return static_cast<int>(strategies.size()); }
  int num_resources() const { return static_cast<int>(resource_cost.size()); }
  bool is_scheduling() const {
    return model == CostModel::LinearLoad || model == CostModel::Conflicting;
  }
  bool unit_weights() const;
  const Strategy& strategy_of(const Profile& p, int player) const {
    return strategies[player][p[player]];
  }
};

// Validates the invariants and fills player_class. Throws InvalidInput.
Game finalize_game(Game game);

void validate_profile(const Game& game, const Profile& profile);

struct LoadMap {
  std::vector<int> count;        // number of users per resource
  std::vector<Rational> weight;  // total user weight per resource
};

LoadMap compute_loads(const Game& game, const Profile& profile);

Cost player_cost(const Game& game, const Profile& profile, int player);

// Cost player would pay on strategy index s, everyone else fixed.
Cost deviation_cost(const Game& game, const Profile& profile, const LoadMap& loads, int player, int s);

Cost social_cost(const Game& game, const Profile& profile);

// Full argmin set of strategy indices, ascending.
std::vector<int> best_response(const Game& game, const Profile& profile, int player);
std::vector<int> best_response(const Game& game, const Profile& profile, const LoadMap& loads,
                               int player);

// Deterministic representative of a best-response set: the lexicographically
// smallest path in network games, the highest-index machine in scheduling games.
int preferred_response(const Game& game, const std::vector<int>& br_set);

bool is_suboptimal(const Game& game, const Profile& profile, int player);
bool is_nash(const Game& game, const Profile& profile);
std::vector<int> suboptimal_players(const Game& game, const Profile& profile);

// Rosenthal potential; throws UnsupportedModel for weighted games.
Cost rosenthal_potential(const Game& game, const Profile& profile);

// Sum of resource costs over a strategy (path cost in network games).
Rational strategy_resource_cost(const Game& game, const Strategy& s);

// Profile with identical players reordered so that the encoding is invariant
// under permutations within a player class.
Profile canonical_profile(const Game& game, const Profile& profile);

std::uint64_t profile_hash(const Profile& profile);
std::string profile_hash_hex(const Profile& profile);

// Conflicting-congestion job cost c(x) = x + B / x.
Cost conflict_cost(const Rational& load, const Rational& B);

}  // namespace brd
