#pragma once

#include "brd/game.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace brd {

// Local information about one player in a network game.
struct NfgStateVector {
  Cost current_cost;
  Rational current_path_cost;
  Cost br_cost;
  Rational br_path_cost;
  std::optional<Rational> weight;  // weighted games only

  bool operator==(const NfgStateVector&) const = default;
};

// Local information about one job in a scheduling game. Loads are listed in
// machine order; the costs are derived from them and kept for convenience.
struct SchedStateVector {
  Rational length;
  int machine = 0;
  std::vector<Rational> loads;
  Cost current_cost;
  Cost br_cost;

  bool operator==(const SchedStateVector&) const = default;
};

using StateVector = std::variant<NfgStateVector, SchedStateVector>;

Cost current_cost_of(const StateVector& v);
Cost br_cost_of(const StateVector& v);

// Dispatches to the network or scheduling variant depending on the game model.
StateVector state_vector(const Game& game, const Profile& profile, int player);

}  // namespace brd
