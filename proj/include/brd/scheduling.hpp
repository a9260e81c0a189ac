#pragma once

#include "brd/game.hpp"
#include "brd/state_vector.hpp"

#include <optional>
#include <vector>

namespace brd {

// Identical machines; the strategy index of a job is its machine index.
Game make_linear_sched_game(int machines, const std::vector<Rational>& lengths);
Game make_coco_game(int machines, int jobs, const Rational& B);

// Profile from a per-job machine list (0-based machines).
Profile sched_profile(const Game& game, const std::vector<int>& machine_of_job);

std::vector<Rational> machine_loads(const Game& game, const Profile& profile);
int active_machine_count(const Game& game, const Profile& profile);

// Load minimizing c(l) = l + B/l over the two integers around sqrt(B), lower on ties.
int l_star(const Rational& B);

// Whether machine j (1-based, loads sorted ascending) can stay active in some
// reachable equilibrium.
bool stays_active(const std::vector<int>& sorted_loads, int j, int n, const Rational& B);

// Number of machines active in the equilibrium the s-opt rule reaches from p0
// (conflicting model). Agrees with the oracle on instances without best-response
// ties between machines of different loads.
int max_active_machines(const Game& game, const Profile& p0);

// The optimal machine-selection rule for the conflicting model: the most
// loaded machine if it is high and its jobs can improve, else the least loaded
// machine if its jobs can improve. nullopt means the profile is an equilibrium.
std::optional<int> s_opt_choose(const Game& game, const Profile& profile);

SchedStateVector sched_state_vector(const Game& game, const Profile& profile, int job);

}  // namespace brd
