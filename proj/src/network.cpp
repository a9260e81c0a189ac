#include "brd/network.hpp"

#include "brd/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace brd {

int Network::node_index(const std::string& name) const {
  for (int v = 0; v < num_nodes(); ++v) {
    if (node_names[v] == name) return v;
  }
  throw InvalidInput("unknown node \"" + name + "\"");
}

int Network::edge_index(int id) const {
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    if (edges[e].id == id) return e;
  }
  throw InvalidInput("unknown edge id " + std::to_string(id));
}

int SppStructure::segment_of_vertex(int node) const {
  for (int j = 0; j < static_cast<int>(vertices.size()); ++j) {
    if (vertices[j] == node) return j;
  }
  return -1;
}

namespace {

void require_terminals(const Network& g) {
  if (g.source < 0 || g.sink < 0) throw InvalidInput("network lacks designated source/sink");
}

void rename_sequential(Network& g) {
  for (int v = 0; v < g.num_nodes(); ++v) g.node_names[v] = "v" + std::to_string(v);
  for (std::size_t e = 0; e < g.edges.size(); ++e) g.edges[e].id = static_cast<int>(e) + 1;
}

// Copies g2 into out, mapping its source and sink through the given indices
// (-1 means allocate a fresh node).
void append(Network& out, const Network& g2, int map_source, int map_sink) {
  std::vector<int> map(g2.num_nodes(), -1);
  for (int v = 0; v < g2.num_nodes(); ++v) {
    if (v == g2.source && map_source >= 0) {
      map[v] = map_source;
    } else if (v == g2.sink && map_sink >= 0) {
      map[v] = map_sink;
    } else {
      map[v] = out.num_nodes();
      out.node_names.push_back("");
    }
  }
  for (const Edge& e : g2.edges) out.edges.push_back(Edge{0, map[e.tail], map[e.head], e.cost});
}

std::pair<int, int> infer_terminals(const Network& net) {
  if (net.source >= 0 && net.sink >= 0) return {net.source, net.sink};
  std::vector<int> indeg(net.num_nodes(), 0), outdeg(net.num_nodes(), 0);
  for (const Edge& e : net.edges) {
    ++outdeg[e.tail];
    ++indeg[e.head];
  }
  int s = -1, t = -1;
  for (int v = 0; v < net.num_nodes(); ++v) {
    if (indeg[v] == 0 && outdeg[v] > 0) {
      if (s != -1) return {-1, -1};
      s = v;
    }
    if (outdeg[v] == 0 && indeg[v] > 0) {
      if (t != -1) return {-1, -1};
      t = v;
    }
  }
  return {s, t};
}

bool ep_rec(const Network& net, const std::vector<int>& edges, int s, int t) {
  if (edges.size() == 1) {
    const Edge& e = net.edges[edges[0]];
    return e.tail == s && e.head == t;
  }
  // Parallel split: group edges by connectivity through non-terminal nodes.
  std::vector<int> parent(net.num_nodes());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int ei : edges) {
    const Edge& e = net.edges[ei];
    if (e.tail != s && e.tail != t && e.head != s && e.head != t) parent[find(e.tail)] = find(e.head);
  }
  std::map<int, std::vector<int>> groups;
  int solo = -1;
  for (int ei : edges) {
    const Edge& e = net.edges[ei];
    int key;
    if (e.tail != s && e.tail != t) {
      key = find(e.tail);
    } else if (e.head != s && e.head != t) {
      key = find(e.head);
    } else {
      key = solo--;  // terminal-to-terminal edge forms its own branch
    }
    groups[key].push_back(ei);
  }
  if (groups.size() >= 2) {
    for (auto& [key, g] : groups) {
      if (!ep_rec(net, g, s, t)) return false;
    }
    return true;
  }
  // Series extension by a single edge at either end.
  auto incident = [&](int v) {
    std::vector<int> out;
    for (int ei : edges) {
      if (net.edges[ei].tail == v || net.edges[ei].head == v) out.push_back(ei);
    }
    return out;
  };
  auto without = [&](int drop) {
    std::vector<int> rest;
    for (int ei : edges) {
      if (ei != drop) rest.push_back(ei);
    }
    return rest;
  };
  auto at_s = incident(s);
  if (at_s.size() == 1) {
    const Edge& e = net.edges[at_s[0]];
    if (e.tail == s && e.head != t && ep_rec(net, without(at_s[0]), e.head, t)) return true;
  }
  auto at_t = incident(t);
  if (at_t.size() == 1) {
    const Edge& e = net.edges[at_t[0]];
    if (e.head == t && e.tail != s && ep_rec(net, without(at_t[0]), s, e.tail)) return true;
  }
  return false;
}

}  // namespace

Network single_edge(const Rational& cost) {
  if (cost <= 0) throw InvalidInput("edge cost must be positive");
  Network g;
  g.node_names = {"v0", "v1"};
  g.edges.push_back(Edge{1, 0, 1, cost});
  g.source = 0;
  g.sink = 1;
  return g;
}

Network parallel_edges(const std::vector<Rational>& costs) {
  if (costs.empty()) throw InvalidInput("parallel block needs at least one edge");
  Network g = single_edge(costs[0]);
  for (std::size_t k = 1; k < costs.size(); ++k) g = compose_parallel(g, single_edge(costs[k]));
  return g;
}

Network compose_series(const Network& g1, const Network& g2) {
  require_terminals(g1);
  require_terminals(g2);
  Network out = g1;
  append(out, g2, g1.sink, -1);
  out.source = g1.source;
  int fresh = g1.num_nodes();
  for (int v = 0; v < g2.num_nodes(); ++v) {
    if (v == g2.source) continue;
    if (v == g2.sink) out.sink = fresh;
    ++fresh;
  }
  rename_sequential(out);
  return out;
}

Network compose_parallel(const Network& g1, const Network& g2) {
  require_terminals(g1);
  require_terminals(g2);
  Network out = g1;
  append(out, g2, g1.source, g1.sink);
  rename_sequential(out);
  return out;
}

Network extend_with_edge(const Network& g, const Rational& cost, Side side) {
  return side == Side::Before ? compose_series(single_edge(cost), g) : compose_series(g, single_edge(cost));
}

std::optional<SppStructure> spp_structure(const Network& net) {
  auto [s, t] = infer_terminals(net);
  if (s < 0 || t < 0 || s == t || net.edges.empty()) return std::nullopt;
  SppStructure spp;
  spp.vertices.push_back(s);
  std::vector<bool> seen(net.num_nodes(), false);
  seen[s] = true;
  std::size_t used = 0;
  int cur = s;
  while (cur != t) {
    std::vector<int> seg;
    int next = -1;
    for (int e = 0; e < static_cast<int>(net.edges.size()); ++e) {
      if (net.edges[e].tail != cur) continue;
      if (next == -1) next = net.edges[e].head;
      if (net.edges[e].head != next) return std::nullopt;
      seg.push_back(e);
    }
    if (next == -1 || seen[next]) return std::nullopt;
    for (const Edge& e : net.edges) {
      if (e.head == next && e.tail != cur) return std::nullopt;
    }
    seen[next] = true;
    used += seg.size();
    spp.segments.push_back(seg);
    spp.vertices.push_back(next);
    cur = next;
  }
  if (used != net.edges.size()) return std::nullopt;
  return spp;
}

bool is_spp(const Network& net) { return spp_structure(net).has_value(); }

bool is_parallel_edge(const Network& net) {
  auto spp = spp_structure(net);
  return spp && spp->segments.size() == 1;
}

bool is_ep(const Network& net) {
  auto [s, t] = infer_terminals(net);
  if (s < 0 || t < 0 || net.edges.empty()) return false;
  std::vector<int> all(net.edges.size());
  std::iota(all.begin(), all.end(), 0);
  return ep_rec(net, all, s, t);
}

TopologyKind classify(const Network& net) {
  if (is_parallel_edge(net)) return TopologyKind::ParallelEdge;
  if (is_spp(net)) return TopologyKind::Spp;
  if (is_ep(net)) return TopologyKind::Ep;
  return TopologyKind::General;
}

std::vector<std::vector<int>> enumerate_paths(const Network& net, int s, int t, std::size_t cap) {
  if (s < 0 || s >= net.num_nodes() || t < 0 || t >= net.num_nodes()) throw InvalidInput("path endpoint not in network");
  if (s == t) throw InvalidInput("source equals target");
  std::vector<std::vector<int>> out_edges(net.num_nodes());
  for (int e = 0; e < static_cast<int>(net.edges.size()); ++e) out_edges[net.edges[e].tail].push_back(e);
  for (auto& v : out_edges) {
    std::sort(v.begin(), v.end(), [&](int a, int b) { return net.edges[a].id < net.edges[b].id; });
  }
  std::vector<std::vector<int>> paths;
  std::vector<int> stack;
  std::vector<bool> on_path(net.num_nodes(), false);
  std::function<void(int)> dfs = [&](int v) {
    if (v == t) {
      if (paths.size() >= cap) throw BudgetExceeded("path count exceeds cap of " + std::to_string(cap));
      paths.push_back(stack);
      return;
    }
    on_path[v] = true;
    for (int e : out_edges[v]) {
      int w = net.edges[e].head;
      if (on_path[w]) continue;
      stack.push_back(e);
      dfs(w);
      stack.pop_back();
    }
    on_path[v] = false;
  };
  dfs(s);
  if (paths.empty()) throw InvalidInput("no path from " + net.node_names[s] + " to " + net.node_names[t]);
  return paths;
}

NetworkGame make_network_game(Network net, std::vector<PlayerSpec> players, bool weighted, std::size_t cap) {
  for (const Edge& e : net.edges) {
    if (e.cost <= 0) throw InvalidInput("edge " + std::to_string(e.id) + " must have positive cost");
    if (e.tail < 0 || e.tail >= net.num_nodes() || e.head < 0 || e.head >= net.num_nodes()) {
      throw InvalidInput("edge " + std::to_string(e.id) + " has an unknown endpoint");
    }
  }
  {
    std::vector<int> ids;
    for (const Edge& e : net.edges) ids.push_back(e.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw InvalidInput("duplicate edge id");
  }
  if (players.empty()) throw InvalidInput("network game has no players");
  if (!weighted) {
    for (const auto& p : players) {
      if (p.weight != 1) throw InvalidInput("unweighted game with non-unit weight");
    }
  } else {
    TopologyKind kind = classify(net);
    auto spp = spp_structure(net);
    bool ok = kind == TopologyKind::ParallelEdge || (spp && spp->segments.size() == 2);
    if (!ok) throw UnsupportedModel("weighted games are limited to parallel-edge and 2-segment SPP networks");
  }
  NetworkGame ng;
  ng.network = std::move(net);
  ng.players = std::move(players);
  ng.weighted = weighted;
  Game g;
  g.model = weighted ? CostModel::WeightedShare : CostModel::FairShare;
  g.social_kind = SocialCostKind::Sum;
  for (const Edge& e : ng.network.edges) g.resource_cost.push_back(e.cost);
  std::map<std::pair<int, int>, std::vector<std::vector<int>>> memo;
  std::vector<bool> covered(ng.network.edges.size(), false);
  for (const auto& p : ng.players) {
    if (p.weight <= 0) throw InvalidInput("player weight must be positive");
    auto key = std::make_pair(p.source, p.target);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, enumerate_paths(ng.network, p.source, p.target, cap)).first;
    ng.paths.push_back(it->second);
    std::vector<Strategy> strategies;
    for (const auto& path : it->second) {
      Strategy s = path;
      std::sort(s.begin(), s.end());
      strategies.push_back(s);
      for (int e : path) covered[e] = true;
    }
    g.strategies.push_back(std::move(strategies));
    g.weight.push_back(p.weight);
  }
  for (std::size_t e = 0; e < covered.size(); ++e) {
    if (!covered[e]) {
      throw InvalidInput("edge " + std::to_string(ng.network.edges[e].id) + " lies on no player's path");
    }
  }
  ng.game = finalize_game(std::move(g));
  return ng;
}

int strategy_from_edge_ids(const NetworkGame& ng, int player, const std::vector<int>& edge_ids) {
  if (player < 0 || player >= static_cast<int>(ng.paths.size())) throw InvalidInput("unknown player id");
  std::vector<int> idx;
  for (int id : edge_ids) idx.push_back(ng.network.edge_index(id));
  const auto& paths = ng.paths[player];
  for (int s = 0; s < static_cast<int>(paths.size()); ++s) {
    if (paths[s] == idx) return s;
  }
  throw InvalidInput("path is not a strategy of player " + std::to_string(player + 1));
}

std::vector<int> edge_ids_of(const NetworkGame& ng, int player, int strategy) {
  std::vector<int> ids;
  for (int e : ng.paths[player][strategy]) ids.push_back(ng.network.edges[e].id);
  return ids;
}

std::vector<int> br_path(const NetworkGame& ng, const Profile& profile, int player) {
  const Game& g = ng.game;
  validate_profile(g, profile);
  const Network& net = ng.network;
  LoadMap loads = compute_loads(g, profile);
  const Strategy& cur = g.strategy_of(profile, player);
  const Rational& w = g.weight[player];
  const int E = static_cast<int>(net.edges.size());
  std::vector<Rational> marginal(E);
  for (int e = 0; e < E; ++e) {
    bool on = std::binary_search(cur.begin(), cur.end(), e);
    if (ng.weighted) {
      marginal[e] = w * net.edges[e].cost / (loads.weight[e] - (on ? w : Rational(0)) + w);
    } else {
      marginal[e] = net.edges[e].cost / (loads.count[e] - (on ? 1 : 0) + 1);
    }
  }
  const int V = net.num_nodes();
  const int s = ng.players[player].source;
  const int t = ng.players[player].target;
  // Bellman-Ford from s and to t; all weights are positive.
  std::vector<std::optional<Rational>> from(V), to(V);
  from[s] = Rational(0);
  to[t] = Rational(0);
  for (int round = 0; round < V; ++round) {
    bool changed = false;
    for (int e = 0; e < E; ++e) {
      const Edge& ed = net.edges[e];
      if (from[ed.tail] && (!from[ed.head] || *from[ed.tail] + marginal[e] < *from[ed.head])) {
        from[ed.head] = *from[ed.tail] + marginal[e];
        changed = true;
      }
      if (to[ed.head] && (!to[ed.tail] || *to[ed.head] + marginal[e] < *to[ed.tail])) {
        to[ed.tail] = *to[ed.head] + marginal[e];
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (!from[t]) throw InvalidInput("no path for player");
  const Rational best = *from[t];
  Network tight;
  tight.node_names = net.node_names;
  std::vector<int> original;
  for (int e = 0; e < E; ++e) {
    const Edge& ed = net.edges[e];
    if (from[ed.tail] && to[ed.head] && *from[ed.tail] + marginal[e] + *to[ed.head] == best) {
      tight.edges.push_back(ed);
      original.push_back(e);
    }
  }
  std::vector<int> result;
  for (const auto& path : enumerate_paths(tight, s, t, kDefaultPathCap)) {
    std::vector<int> mapped;
    for (int e : path) mapped.push_back(original[e]);
    const auto& paths = ng.paths[player];
    auto it = std::find(paths.begin(), paths.end(), mapped);
    if (it == paths.end()) throw InvalidInput("cheapest path missing from the strategy list");
    result.push_back(static_cast<int>(it - paths.begin()));
  }
  std::sort(result.begin(), result.end());
  return result;
}

NfgStateVector nfg_state_vector(const Game& game, const Profile& profile, int player) {
  if (game.is_scheduling()) throw UnsupportedModel("network state vector requested for a scheduling game");
  validate_profile(game, profile);
  LoadMap loads = compute_loads(game, profile);
  auto br = best_response(game, profile, loads, player);
  int pick = preferred_response(game, br);
  NfgStateVector v;
  v.current_cost = deviation_cost(game, profile, loads, player, profile[player]);
  v.current_path_cost = strategy_resource_cost(game, game.strategy_of(profile, player));
  v.br_cost = deviation_cost(game, profile, loads, player, pick);
  v.br_path_cost = strategy_resource_cost(game, game.strategies[player][pick]);
  if (game.model == CostModel::WeightedShare) v.weight = game.weight[player];
  return v;
}

}  // namespace brd
