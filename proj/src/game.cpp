#include "brd/game.hpp"

#include "brd/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace brd {

bool Game::unit_weights() const {
  return std::all_of(weight.begin(), weight.end(), [](const Rational& w) { return w == 1; });
}

Game finalize_game(Game game) {
  const int n = game.num_players();
  const int m = game.num_resources();
  if (n == 0) throw InvalidInput("game has no players");
  if (static_cast<int>(game.weight.size()) != n) throw InvalidInput("weight count does not match players");
  for (const auto& c : game.resource_cost) {
    if (c < 0) throw InvalidInput("negative resource cost");
  }
  for (int i = 0; i < n; ++i) {
    if (game.weight[i] <= 0) throw InvalidInput("player weight must be positive");
    if (game.strategies[i].empty()) throw InvalidInput("player " + std::to_string(i + 1) + " has no strategy");
    for (const auto& s : game.strategies[i]) {
      if (s.empty()) throw InvalidInput("empty strategy");
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] < 0 || s[k] >= m) throw InvalidInput("strategy references unknown resource");
        if (k > 0 && s[k] <= s[k - 1]) throw InvalidInput("strategy resources must be strictly increasing");
      }
    }
  }
  if (game.model == CostModel::Conflicting) {
    if (game.activation_cost <= 0) throw InvalidInput("activation cost B must be positive");
    if (!game.unit_weights()) throw InvalidInput("conflicting-congestion jobs must have unit length");
  }
  if (game.model == CostModel::FairShare && !game.unit_weights()) {
    throw InvalidInput("fair-share model requires unit weights");
  }
  game.player_class.assign(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (game.player_class[i] != -1) continue;
    game.player_class[i] = next;
    for (int j = i + 1; j < n; ++j) {
      if (game.player_class[j] == -1 && game.weight[j] == game.weight[i] &&
          game.strategies[j] == game.strategies[i]) {
        game.player_class[j] = next;
      }
    }
    ++next;
  }
  return game;
}

void validate_profile(const Game& game, const Profile& profile) {
  if (static_cast<int>(profile.size()) != game.num_players()) {
    throw InvalidInput("profile does not assign every player");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (profile[i] < 0 || profile[i] >= static_cast<int>(game.strategies[i].size())) {
      throw InvalidInput("player " + std::to_string(i + 1) + " assigned a strategy outside her space");
    }
  }
}

LoadMap compute_loads(const Game& game, const Profile& profile) {
  LoadMap loads;
  loads.count.assign(game.num_resources(), 0);
  loads.weight.assign(game.num_resources(), Rational(0));
  for (int i = 0; i < game.num_players(); ++i) {
    for (int e : game.strategy_of(profile, i)) {
      ++loads.count[e];
      loads.weight[e] += game.weight[i];
    }
  }
  return loads;
}

Cost conflict_cost(const Rational& load, const Rational& B) { return load + B / load; }

Cost deviation_cost(const Game& game, const Profile& profile, const LoadMap& loads, int player, int s) {
  const Strategy& current = game.strategy_of(profile, player);
  const Strategy& target = game.strategies[player][s];
  const Rational& w = game.weight[player];
  Cost total = 0;
  for (int e : target) {
    bool on = std::binary_search(current.begin(), current.end(), e);
    switch (game.model) {
      case CostModel::FairShare: {
        int users = loads.count[e] - (on ? 1 : 0) + 1;
        total += game.resource_cost[e] / users;
        break;
      }
      case CostModel::WeightedShare: {
        Rational wl = loads.weight[e] - (on ? w : Rational(0)) + w;
        total += w * game.resource_cost[e] / wl;
        break;
      }
      case CostModel::LinearLoad: {
        total += loads.weight[e] - (on ? w : Rational(0)) + w;
        break;
      }
      case CostModel::Conflicting: {
        Rational L = loads.count[e] - (on ? 1 : 0) + 1;
        total += conflict_cost(L, game.activation_cost);
        break;
      }
    }
  }
  return total;
}

Cost player_cost(const Game& game, const Profile& profile, int player) {
  if (player < 0 || player >= game.num_players()) throw InvalidInput("unknown player id");
  validate_profile(game, profile);
  LoadMap loads = compute_loads(game, profile);
  return deviation_cost(game, profile, loads, player, profile[player]);
}

Cost social_cost(const Game& game, const Profile& profile) {
  validate_profile(game, profile);
  LoadMap loads = compute_loads(game, profile);
  Cost acc = 0;
  for (int i = 0; i < game.num_players(); ++i) {
    Cost c = deviation_cost(game, profile, loads, i, profile[i]);
    if (game.social_kind == SocialCostKind::Sum) {
      acc += c;
    } else if (c > acc) {
      acc = c;
    }
  }
  return acc;
}

std::vector<int> best_response(const Game& game, const Profile& profile, const LoadMap& loads, int player) {
  std::vector<int> best;
  Cost best_cost;
  const int k = static_cast<int>(game.strategies[player].size());
  for (int s = 0; s < k; ++s) {
    Cost c = deviation_cost(game, profile, loads, player, s);
    if (best.empty() || c < best_cost) {
      best.assign(1, s);
      best_cost = c;
    } else if (c == best_cost) {
      best.push_back(s);
    }
  }
  return best;
}

std::vector<int> best_response(const Game& game, const Profile& profile, int player) {
  if (player < 0 || player >= game.num_players()) throw InvalidInput("unknown player id");
  validate_profile(game, profile);
  return best_response(game, profile, compute_loads(game, profile), player);
}

int preferred_response(const Game& game, const std::vector<int>& br_set) {
  return game.is_scheduling() ? br_set.back() : br_set.front();
}

namespace {

bool suboptimal_with(const Game& game, const Profile& profile, const LoadMap& loads, int player) {
  Cost own = deviation_cost(game, profile, loads, player, profile[player]);
  const int k = static_cast<int>(game.strategies[player].size());
  for (int s = 0; s < k; ++s) {
    if (s != profile[player] && deviation_cost(game, profile, loads, player, s) < own) return true;
  }
  return false;
}

}  // namespace

bool is_suboptimal(const Game& game, const Profile& profile, int player) {
  validate_profile(game, profile);
  return suboptimal_with(game, profile, compute_loads(game, profile), player);
}

std::vector<int> suboptimal_players(const Game& game, const Profile& profile) {
  validate_profile(game, profile);
  LoadMap loads = compute_loads(game, profile);
  std::vector<int> out;
  for (int i = 0; i < game.num_players(); ++i) {
    if (suboptimal_with(game, profile, loads, i)) out.push_back(i);
  }
  return out;
}

bool is_nash(const Game& game, const Profile& profile) { return suboptimal_players(game, profile).empty(); }

Cost rosenthal_potential(const Game& game, const Profile& profile) {
  if (!game.unit_weights()) throw UnsupportedModel("potential is defined for unweighted games only");
  validate_profile(game, profile);
  LoadMap loads = compute_loads(game, profile);
  Cost phi = 0;
  for (int e = 0; e < game.num_resources(); ++e) {
    for (int k = 1; k <= loads.count[e]; ++k) {
      switch (game.model) {
        case CostModel::FairShare:
        case CostModel::WeightedShare:
          phi += game.resource_cost[e] / k;
          break;
        case CostModel::LinearLoad:
          phi += k;
          break;
        case CostModel::Conflicting:
          phi += conflict_cost(Rational(k), game.activation_cost);
          break;
      }
    }
  }
  return phi;
}

Rational strategy_resource_cost(const Game& game, const Strategy& s) {
  Rational total = 0;
  for (int e : s) total += game.resource_cost[e];
  return total;
}

Profile canonical_profile(const Game& game, const Profile& profile) {
  std::map<int, std::vector<int>> by_class;
  for (int i = 0; i < game.num_players(); ++i) by_class[game.player_class[i]].push_back(profile[i]);
  for (auto& [cls, v] : by_class) std::sort(v.begin(), v.end());
  Profile out(profile.size());
  std::map<int, std::size_t> cursor;
  for (int i = 0; i < game.num_players(); ++i) {
    int cls = game.player_class[i];
    out[i] = by_class[cls][cursor[cls]++];
  }
  return out;
}

std::uint64_t profile_hash(const Profile& profile) {
  std::uint64_t h = 1469598103934665603ULL;
  for (int v : profile) {
    auto u = static_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) {
      h ^= (u >> (8 * b)) & 0xFFu;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::string profile_hash_hex(const Profile& profile) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(profile_hash(profile)));
  return buf;
}

}  // namespace brd
