#include "brd/state_vector.hpp"

#include "brd/network.hpp"
#include "brd/scheduling.hpp"

namespace brd {

Cost current_cost_of(const StateVector& v) {
  return std::visit([](const auto& x) { return x.current_cost; }, v);
}

Cost br_cost_of(const StateVector& v) {
  return std::visit([](const auto& x) { return x.br_cost; }, v);
}

StateVector state_vector(const Game& game, const Profile& profile, int player) {
  if (game.is_scheduling()) return sched_state_vector(game, profile, player);
  return nfg_state_vector(game, profile, player);
}

}  // namespace brd
