#include "brd/oracle.hpp"

#include "brd/errors.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <mutex>
#include <thread>
#include <tuple>
#include <unordered_map>

namespace brd {

namespace {

struct ProfileHash {
  std::size_t operator()(const Profile& p) const { return static_cast<std::size_t>(profile_hash(p)); }
};

std::vector<std::vector<int>> class_members(const Game& game) {
  int classes = 0;
  for (int c : game.player_class) classes = std::max(classes, c + 1);
  std::vector<std::vector<int>> members(classes);
  for (int i = 0; i < game.num_players(); ++i) members[game.player_class[i]].push_back(i);
  return members;
}

void canonicalize_class(Profile& p, const std::vector<int>& members) {
  std::vector<int> values;
  values.reserve(members.size());
  for (int i : members) values.push_back(p[i]);
  std::sort(values.begin(), values.end());
  for (std::size_t k = 0; k < members.size(); ++k) p[members[k]] = values[k];
}

Profile canonicalize(const Game& game, const std::vector<std::vector<int>>& members, Profile p) {
  (void)game;
  for (const auto& m : members) canonicalize_class(p, m);
  return p;
}

struct Successor {
  Profile profile;
  int player;
  int from;
  int to;
};

struct Expansion {
  bool nash = true;
  std::vector<Successor> successors;
};

Expansion expand(const Game& game, const std::vector<std::vector<int>>& members, const Profile& p) {
  Expansion ex;
  LoadMap loads = compute_loads(game, p);
  for (const auto& cls : members) {
    int last = -1;
    for (int i : cls) {
      if (p[i] == last) continue;  // same class, same strategy: equivalent mover
      last = p[i];
      auto br = best_response(game, p, loads, i);
      if (std::binary_search(br.begin(), br.end(), p[i])) continue;
      ex.nash = false;
      for (int y : br) {
        Profile q = p;
        q[i] = y;
        canonicalize_class(q, cls);
        ex.successors.push_back(Successor{std::move(q), i, p[i], y});
      }
    }
  }
  return ex;
}

}  // namespace

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  int n = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), count));
  for (int t = 0; t < n; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

ReachabilityGraph::ReachabilityGraph(const Game& game, const Profile& p0, OracleOptions options)
    : game_(&game), p0_(p0) {
  validate_profile(game, p0);
  const auto members = class_members(game);
  const bool weighted = !game.unit_weights();
  std::unordered_map<Profile, int, ProfileHash> index;
  std::vector<std::vector<int>> edges;
  profiles_.push_back(canonicalize(game, members, p0));
  nodes_.push_back(Node{-1, -1, -1, -1});
  index.emplace(profiles_.front(), 0);
  if (weighted) edges.emplace_back();
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<Expansion> ex(frontier.size());
    parallel_for(frontier.size(), options.jobs,
                 [&](std::size_t k) { ex[k] = expand(game, members, profiles_[frontier[k]]); });
    std::vector<int> next;
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      int from_node = frontier[k];
      if (ex[k].nash) equilibrium_nodes_.push_back(from_node);
      for (auto& s : ex[k].successors) {
        auto it = index.find(s.profile);
        int id;
        if (it == index.end()) {
          if (profiles_.size() >= options.state_limit) {
            throw BudgetExceeded("oracle state limit of " + std::to_string(options.state_limit) + " exceeded");
          }
          id = static_cast<int>(profiles_.size());
          index.emplace(s.profile, id);
          profiles_.push_back(std::move(s.profile));
          nodes_.push_back(Node{from_node, s.player, s.from, s.to});
          if (weighted) edges.emplace_back();
          next.push_back(id);
        } else {
          id = it->second;
        }
        if (weighted) edges[from_node].push_back(id);
      }
    }
    frontier = std::move(next);
  }
  if (weighted) {
    std::vector<char> colour(nodes_.size(), 0);
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    colour[0] = 1;
    while (!stack.empty()) {
      int v = stack.back().first;
      std::size_t& k = stack.back().second;
      if (k < edges[v].size()) {
        int w = edges[v][k++];
        if (colour[w] == 1) throw CycleDetected("best-response graph contains a cycle");
        if (colour[w] == 0) {
          colour[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        colour[v] = 2;
        stack.pop_back();
      }
    }
  }
  std::sort(equilibrium_nodes_.begin(), equilibrium_nodes_.end(),
            [&](int a, int b) { return profiles_[a] < profiles_[b]; });
  for (int id : equilibrium_nodes_) {
    equilibria_.push_back(profiles_[id]);
    costs_.push_back(social_cost(game, profiles_[id]));
  }
}

bool ReachabilityGraph::contains_equilibrium(const Profile& profile) const {
  Profile c = canonicalize(*game_, class_members(*game_), profile);
  return std::binary_search(equilibria_.begin(), equilibria_.end(), c);
}

Trace ReachabilityGraph::witness(const Profile& canonical_equilibrium) const {
  auto it = std::lower_bound(equilibria_.begin(), equilibria_.end(), canonical_equilibrium);
  if (it == equilibria_.end() || *it != canonical_equilibrium) throw InvalidInput("profile is not a reachable equilibrium");
  int node = equilibrium_nodes_[it - equilibria_.begin()];
  std::vector<const Node*> path;
  for (int v = node; nodes_[v].parent >= 0; v = nodes_[v].parent) path.push_back(&nodes_[v]);
  std::reverse(path.begin(), path.end());
  const Game& g = *game_;
  Profile actual = p0_;
  std::vector<std::pair<int, int>> moves;
  for (const Node* n : path) {
    int cls = g.player_class[n->player];
    int mover = -1;
    for (int i = 0; i < g.num_players(); ++i) {
      if (g.player_class[i] == cls && actual[i] == n->from) {
        mover = i;
        break;
      }
    }
    if (mover < 0) throw std::logic_error("witness replay lost track of a mover");
    moves.emplace_back(mover, n->to);
    actual[mover] = n->to;
  }
  return replay_moves(g, p0_, moves);
}

ReachabilityGraph reachable_ne(const Game& game, const Profile& p0, OracleOptions options) {
  return ReachabilityGraph(game, p0, options);
}

namespace {

std::size_t best_index(const ReachabilityGraph& graph) {
  const auto& costs = graph.equilibrium_costs();
  std::size_t best = 0;
  for (std::size_t k = 1; k < costs.size(); ++k) {
    if (costs[k] < costs[best]) best = k;
  }
  return best;
}

std::optional<BestReachable> probe_floor(const Game& game, const Profile& p0) {
  auto floor = social_cost_floor(game);
  if (!floor) return std::nullopt;
  auto accept = [&](Trace t) -> std::optional<BestReachable> {
    Cost c = social_cost(game, t.terminal);
    if (c != *floor) return std::nullopt;
    return BestReachable{canonical_profile(game, t.terminal), c, std::move(t), true};
  };
  if (is_nash(game, p0)) return accept(replay_moves(game, p0, {}));
  const auto members = class_members(game);
  for (const auto& cls : members) {
    std::vector<int> seen;
    for (int i : cls) {
      if (std::find(seen.begin(), seen.end(), p0[i]) != seen.end()) continue;
      seen.push_back(p0[i]);
      if (!is_suboptimal(game, p0, i)) continue;
      Trace t = replay_moves(game, p0, {{i, preferred_response(game, best_response(game, p0, i))}});
      complete_to_nash(game, t);
      if (auto found = accept(std::move(t))) return found;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Cost> social_cost_floor(const Game& game) {
  switch (game.model) {
    case CostModel::FairShare:
    case CostModel::WeightedShare: {
      if (game.social_kind != SocialCostKind::Sum) return std::nullopt;
      Cost floor = 0;
      for (const auto& strategies : game.strategies) {
        Cost cheapest = strategy_resource_cost(game, strategies.front());
        for (const auto& s : strategies) cheapest = std::min(cheapest, strategy_resource_cost(game, s));
        floor = std::max(floor, cheapest);
      }
      return floor;
    }
    case CostModel::LinearLoad: {
      if (game.social_kind != SocialCostKind::Makespan) return std::nullopt;
      Rational total = 0;
      Rational heaviest = 0;
      for (const auto& w : game.weight) {
        total += w;
        heaviest = std::max(heaviest, w);
      }
      int machines = game.num_resources();
      Rational average = total / machines;
      return std::max(heaviest, average);
    }
    case CostModel::Conflicting:
      return std::nullopt;
  }
  return std::nullopt;
}

BestReachable best_reachable(const Game& game, const Profile& p0, OracleOptions options) {
  validate_profile(game, p0);
  if (auto found = probe_floor(game, p0)) return *found;
  ReachabilityGraph graph(game, p0, options);
  std::size_t b = best_index(graph);
  return BestReachable{graph.equilibria()[b], graph.equilibrium_costs()[b], graph.witness(graph.equilibria()[b]), false};
}

Trace optimal_sequence(const Game& game, const Profile& p0, OracleOptions options) {
  return best_reachable(game, p0, options).witness;
}

InefficiencyReport rule_inefficiency(const Game& game, const Profile& p0, const DeviatorRule& rule,
                                     OracleOptions options, const std::string& game_id) {
  std::optional<ReachabilityGraph> graph;
  std::optional<BestReachable> certified;
  try {
    graph.emplace(game, p0, options);
  } catch (const BudgetExceeded&) {
    certified = probe_floor(game, p0);
    if (!certified) throw;
  }
  RuleReach reach = reachable_by_rule(game, p0, rule, TiePolicy{RuleTie::LowestId, BrTie::BranchAll},
                                      options.state_limit);
  InefficiencyReport rep;
  rep.game_id = game_id;
  rep.initial = p0;
  rep.rule = rule.name();
  rep.rule_states = reach.states_visited;
  if (graph) {
    rep.oracle_states = graph->states_visited();
    std::size_t b = best_index(*graph);
    rep.best_cost = graph->equilibrium_costs()[b];
    rep.best_witness = graph->witness(graph->equilibria()[b]);
    const auto& costs = graph->equilibrium_costs();
    rep.max_equilibrium_cost = *std::max_element(costs.begin(), costs.end());
    rep.min_equilibrium_cost = *std::min_element(costs.begin(), costs.end());
  } else {
    rep.best_cost = certified->cost;
    rep.best_witness = certified->witness;
  }
  std::size_t worst = 0;
  std::vector<Cost> rule_costs;
  for (std::size_t k = 0; k < reach.equilibria.size(); ++k) {
    if (graph && !graph->contains_equilibrium(reach.equilibria[k])) {
      throw std::logic_error("rule reached an equilibrium the oracle did not find");
    }
    rule_costs.push_back(social_cost(game, reach.equilibria[k]));
    if (rule_costs[k] > rule_costs[worst]) worst = k;
    rep.rule_equilibria.push_back(canonical_profile(game, reach.equilibria[k]));
  }
  std::sort(rep.rule_equilibria.begin(), rep.rule_equilibria.end());
  rep.rule_equilibria.erase(std::unique(rep.rule_equilibria.begin(), rep.rule_equilibria.end()),
                            rep.rule_equilibria.end());
  rep.worst_rule_cost = rule_costs[worst];
  rep.worst_witness = reach.witnesses[worst];
  rep.alpha = rep.worst_rule_cost / rep.best_cost;
  if (rep.alpha < 1) throw std::logic_error("rule reached an equilibrium cheaper than the best reachable one");
  if (graph && rep.alpha > *rep.max_equilibrium_cost / *rep.min_equilibrium_cost) {
    throw std::logic_error("inefficiency exceeds the spread of reachable equilibrium costs");
  }
  return rep;
}

std::vector<Profile> all_profiles(const Game& game, std::size_t guard) {
  std::size_t total = 1;
  for (const auto& s : game.strategies) {
    if (total > guard / std::max<std::size_t>(1, s.size()) + 1) throw BudgetExceeded("profile enumeration guard exceeded");
    total *= s.size();
  }
  if (total > guard) throw BudgetExceeded("profile enumeration guard exceeded");
  std::vector<Profile> out;
  out.reserve(total);
  Profile p(game.num_players(), 0);
  for (;;) {
    out.push_back(p);
    int i = game.num_players() - 1;
    while (i >= 0 && ++p[i] == static_cast<int>(game.strategies[i].size())) p[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

Rational game_inefficiency(const Game& game, const DeviatorRule& rule, const std::vector<Profile>& initial_profiles,
                           OracleOptions options) {
  if (initial_profiles.empty()) throw InvalidInput("no initial profiles supplied");
  std::vector<Rational> alphas(initial_profiles.size());
  OracleOptions inner = options;
  inner.jobs = 1;
  parallel_for(initial_profiles.size(), options.jobs, [&](std::size_t k) {
    alphas[k] = rule_inefficiency(game, initial_profiles[k], rule, inner).alpha;
  });
  return *std::max_element(alphas.begin(), alphas.end());
}

}  // namespace brd
