#include "brd/scheduling.hpp"

#include "brd/errors.hpp"

#include <algorithm>

namespace brd {

namespace {

Game machines_game(int machines, std::vector<Rational> lengths, CostModel model, const Rational& B) {
  if (machines < 1) throw InvalidInput("at least one machine is required");
  if (lengths.empty()) throw InvalidInput("at least one job is required");
  Game g;
  g.model = model;
  g.social_kind = SocialCostKind::Makespan;
  g.resource_cost.assign(machines, Rational(0));
  g.activation_cost = B;
  std::vector<Strategy> all;
  for (int j = 0; j < machines; ++j) all.push_back(Strategy{j});
  for (auto& w : lengths) {
    g.weight.push_back(w);
    g.strategies.push_back(all);
  }
  return finalize_game(std::move(g));
}

void require_conflicting(const Game& game) {
  if (game.model != CostModel::Conflicting) throw UnsupportedModel("operation requires the conflicting-congestion model");
}

}  // namespace

Game make_linear_sched_game(int machines, const std::vector<Rational>& lengths) {
  return machines_game(machines, lengths, CostModel::LinearLoad, Rational(0));
}

Game make_coco_game(int machines, int jobs, const Rational& B) {
  if (B <= 0) throw InvalidInput("activation cost B must be positive");
  if (jobs < 1) throw InvalidInput("at least one job is required");
  return machines_game(machines, std::vector<Rational>(jobs, Rational(1)), CostModel::Conflicting, B);
}

Profile sched_profile(const Game& game, const std::vector<int>& machine_of_job) {
  Profile p(machine_of_job.begin(), machine_of_job.end());
  validate_profile(game, p);
  return p;
}

std::vector<Rational> machine_loads(const Game& game, const Profile& profile) {
  if (!game.is_scheduling()) throw UnsupportedModel("machine loads requested for a network game");
  return compute_loads(game, profile).weight;
}

int active_machine_count(const Game& game, const Profile& profile) {
  auto loads = machine_loads(game, profile);
  return static_cast<int>(std::count_if(loads.begin(), loads.end(), [](const Rational& l) { return l > 0; }));
}

int l_star(const Rational& B) {
  if (B <= 0) throw InvalidInput("activation cost B must be positive");
  Integer lo = isqrt_floor(B);
  if (lo == 0) return 1;
  Integer hi = Rational(lo * lo) == B ? lo : Integer(lo + 1);
  Rational c_lo = conflict_cost(Rational(lo), B);
  Rational c_hi = conflict_cost(Rational(hi), B);
  return static_cast<int>(c_hi < c_lo ? hi : lo);
}

bool stays_active(const std::vector<int>& sorted_loads, int j, int n, const Rational& B) {
  const int m = static_cast<int>(sorted_loads.size());
  if (j < 1 || j > m) throw InvalidInput("machine position out of range");
  if (!std::is_sorted(sorted_loads.begin(), sorted_loads.end())) throw InvalidInput("loads must be sorted ascending");
  if (j == m) return true;
  int lj = sorted_loads[j - 1];
  return Rational(n - lj, m - j) > B / (lj + 1);
}

int max_active_machines(const Game& game, const Profile& p0) {
  require_conflicting(game);
  validate_profile(game, p0);
  // Replays the s-opt rule on machine loads alone; jobs on a machine are interchangeable.
  std::vector<int> loads;
  for (const auto& l : machine_loads(game, p0)) loads.push_back(static_cast<int>(l));
  const Rational& B = game.activation_cost;
  const int m = static_cast<int>(loads.size());
  const int ls = l_star(B);
  auto target = [&](int from) {
    int best = -1;
    Rational best_cost;
    for (int s = 0; s < m; ++s) {
      if (s == from) continue;
      Rational c = conflict_cost(Rational(loads[s] + 1), B);
      if (best == -1 || c <= best_cost) {
        best = s;
        best_cost = c;
      }
    }
    if (best != -1 && best_cost < conflict_cost(Rational(loads[from]), B)) return best;
    return -1;
  };
  for (;;) {
    int highest = -1, lowest = -1;
    for (int j = 0; j < m; ++j) {
      if (loads[j] == 0) continue;
      if (highest == -1 || loads[j] >= loads[highest]) highest = j;
      if (lowest == -1 || loads[j] < loads[lowest]) lowest = j;
    }
    int from = -1, to = -1;
    if (loads[highest] >= ls && (to = target(highest)) != -1) {
      from = highest;
    } else if ((to = target(lowest)) != -1) {
      from = lowest;
    } else {
      break;
    }
    --loads[from];
    ++loads[to];
  }
  return static_cast<int>(std::count_if(loads.begin(), loads.end(), [](int l) { return l > 0; }));
}

std::optional<int> s_opt_choose(const Game& game, const Profile& profile) {
  require_conflicting(game);
  validate_profile(game, profile);
  LoadMap loads = compute_loads(game, profile);
  const int m = game.num_resources();
  int highest = -1, lowest = -1;
  for (int j = 0; j < m; ++j) {
    int l = loads.count[j];
    if (l == 0) continue;
    if (highest == -1 || l >= loads.count[highest]) highest = j;
    if (lowest == -1 || l < loads.count[lowest]) lowest = j;
  }
  auto machine_suboptimal = [&](int machine) {
    for (int i = 0; i < game.num_players(); ++i) {
      if (profile[i] != machine) continue;
      Cost own = deviation_cost(game, profile, loads, i, machine);
      for (int s = 0; s < m; ++s) {
        if (s != machine && deviation_cost(game, profile, loads, i, s) < own) return true;
      }
      return false;
    }
    return false;
  };
  if (loads.count[highest] >= l_star(game.activation_cost) && machine_suboptimal(highest)) return highest;
  if (machine_suboptimal(lowest)) return lowest;
  return std::nullopt;
}

SchedStateVector sched_state_vector(const Game& game, const Profile& profile, int job) {
  if (!game.is_scheduling()) throw UnsupportedModel("scheduling state vector requested for a network game");
  validate_profile(game, profile);
  LoadMap loads = compute_loads(game, profile);
  auto br = best_response(game, profile, loads, job);
  SchedStateVector v;
  v.length = game.weight[job];
  v.machine = profile[job];
  v.loads = loads.weight;
  v.current_cost = deviation_cost(game, profile, loads, job, profile[job]);
  v.br_cost = deviation_cost(game, profile, loads, job, preferred_response(game, br));
  return v;
}

}  // namespace brd
