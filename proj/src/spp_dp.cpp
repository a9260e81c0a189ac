#include "brd/spp_dp.hpp"

#include "brd/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace brd {

int SppInstance::edge_in_segment(const Profile& profile, int player, int segment) const {
  if (!covers(player, segment)) return -1;
  const auto& seg = spp.segments[segment - 1];
  for (int e : game.paths[player][profile[player]]) {
    if (std::find(seg.begin(), seg.end(), e) != seg.end()) return e;
  }
  throw std::logic_error("path misses a segment of its interval");
}

SppInstance make_spp_instance(const NetworkGame& game, const Profile& initial) {
  if (game.weighted) throw UnsupportedModel("segment dynamic programs need an unweighted game");
  auto spp = spp_structure(game.network);
  if (!spp) throw UnsupportedModel("network is not a series of parallel-edge segments");
  validate_profile(game.game, initial);
  SppInstance inst{game, *spp, {}, {}, initial};
  for (const auto& p : game.players) {
    int s = spp->segment_of_vertex(p.source);
    int t = spp->segment_of_vertex(p.target);
    if (s < 0 || t < 0 || s >= t) throw InvalidInput("player terminals must be segment vertices u_s, u_t with s < t");
    inst.source.push_back(s);
    inst.target.push_back(t);
  }
  return inst;
}

bool is_single_source(const SppInstance& instance) {
  return std::all_of(instance.source.begin(), instance.source.end(), [](int s) { return s == 0; });
}

bool is_proper_intervals(const SppInstance& instance) {
  const int n = instance.num_players();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (instance.source[a] < instance.source[b] && instance.target[a] > instance.target[b]) return false;
    }
  }
  return true;
}

std::vector<int> segment_best_response(const SppInstance& instance, const Profile& profile, int player,
                                       int segment) {
  if (!instance.covers(player, segment)) throw InvalidInput("segment outside the player's interval");
  LoadMap loads = compute_loads(instance.game.game, profile);
  int current = instance.edge_in_segment(profile, player, segment);
  std::vector<int> best;
  Rational best_cost;
  for (int e : instance.spp.segments[segment - 1]) {
    Rational c = instance.game.network.edges[e].cost / (loads.count[e] - (e == current ? 1 : 0) + 1);
    if (best.empty() || c < best_cost) {
      best = {e};
      best_cost = c;
    } else if (c == best_cost) {
      best.push_back(e);
    }
  }
  std::sort(best.begin(), best.end());
  return best;
}

namespace {

DpTable prepare_table(const SppInstance& inst) {
  const int m = inst.num_segments();
  const int n = inst.num_players();
  DpTable table;
  table.segments = m;
  table.opt.assign(m + 1, std::vector<Rational>(m + 1, Rational(0)));
  table.first_mover.assign(m + 1, std::vector<int>(m + 1, -1));
  table.planned_edge.assign(n, std::vector<int>(m + 1, -1));
  table.prefix_cost.assign(n, std::vector<std::vector<Rational>>(m + 1, std::vector<Rational>(m + 1, Rational(0))));
  for (int i = 0; i < n; ++i) {
    for (int j = inst.source[i] + 1; j <= inst.target[i]; ++j) {
      auto br = segment_best_response(inst, inst.initial, i, j);
      if (br.size() != 1) {
        throw UnsupportedModel("player " + std::to_string(i + 1) + " has tied best-response edges in segment " +
                               std::to_string(j));
      }
      table.planned_edge[i][j] = br.front();
    }
    for (int s = 0; s <= m; ++s) {
      Rational acc = 0;
      for (int t = s + 1; t <= m; ++t) {
        if (inst.covers(i, t)) acc += inst.game.network.edges[table.planned_edge[i][t]].cost;
        table.prefix_cost[i][s][t] = acc;
      }
    }
  }
  return table;
}

void collect_skeleton(const SppInstance& inst, const DpTable& table, int s, int t, std::vector<int>& out) {
  if (s >= t) return;
  int i = table.first_mover[s][t];
  out.push_back(i);
  int a = std::max(s, inst.source[i]);
  int b = std::min(t, inst.target[i]);
  collect_skeleton(inst, table, s, a, out);
  collect_skeleton(inst, table, b, t, out);
}

// Replays the first movers, skipping any that cannot improve when reached,
// then finishes with clean-up moves.
DpResult finish(const SppInstance& inst, DpTable table) {
  const Game& g = inst.game.game;
  const int m = inst.num_segments();
  DpResult result;
  result.opt = table.opt[0][m];
  collect_skeleton(inst, table, 0, m, result.skeleton);
  Profile cur = inst.initial;
  std::vector<std::pair<int, int>> moves;
  for (int i : result.skeleton) {
    if (!is_suboptimal(g, cur, i)) continue;
    int to = preferred_response(g, best_response(g, cur, i));
    Profile next = apply_move(cur, i, to);
    for (int j = inst.source[i] + 1; j <= inst.target[i]; ++j) {
      if (inst.edge_in_segment(next, i, j) != table.planned_edge[i][j] &&
          resolved_at(inst, cur).edge[j] == std::nullopt) {
        throw std::logic_error("first mover left her planned edge in segment " + std::to_string(j));
      }
    }
    moves.emplace_back(i, to);
    cur = std::move(next);
  }
  result.trace = replay_moves(g, inst.initial, moves);
  complete_to_nash(g, result.trace);
  Rational reached = social_cost(g, result.trace.terminal);
  if (reached != result.opt) {
    throw std::logic_error("replayed sequence reaches " + to_string(reached) + ", table promises " +
                           to_string(result.opt));
  }
  result.table = std::move(table);
  return result;
}

}  // namespace

DpResult dp_single_source(const SppInstance& instance) {
  if (!is_single_source(instance)) throw InvalidInput("players do not share the source u_0");
  DpTable table = prepare_table(instance);
  const int m = instance.num_segments();
  // OPT_j for the last j segments N_j; a mover with target u_k hands over to OPT_{m-k}.
  for (int j = 1; j <= m; ++j) {
    const int s = m - j;
    int best = -1;
    Rational best_value;
    for (int i = 0; i < instance.num_players(); ++i) {
      if (instance.target[i] <= s) continue;
      Rational v = table.prefix_cost[i][s][instance.target[i]] + table.opt[instance.target[i]][m];
      if (best < 0 || v < best_value) {
        best = i;
        best_value = v;
      }
    }
    table.opt[s][m] = best_value;
    table.first_mover[s][m] = best;
  }
  return finish(instance, std::move(table));
}

DpResult dp_proper_intervals(const SppInstance& instance) {
  if (!is_proper_intervals(instance)) throw InvalidInput("player intervals are not proper");
  DpTable table = prepare_table(instance);
  const int m = instance.num_segments();
  for (int len = 1; len <= m; ++len) {
    for (int s = 0; s + len <= m; ++s) {
      const int t = s + len;
      int best = -1;
      Rational best_value;
      for (int i = 0; i < instance.num_players(); ++i) {
        const int si = instance.source[i];
        const int ti = instance.target[i];
        if (si >= t || ti <= s) continue;
        Rational v;
        if (si <= s && ti >= t) {
          v = table.prefix_cost[i][s][t];
        } else if (si <= s) {
          v = table.prefix_cost[i][s][ti] + table.opt[ti][t];
        } else if (ti >= t) {
          v = table.opt[s][si] + table.prefix_cost[i][si][t];
        } else {
          v = table.opt[s][si] + table.prefix_cost[i][si][ti] + table.opt[ti][t];
        }
        if (best < 0 || v < best_value) {
          best = i;
          best_value = v;
        }
      }
      if (best < 0) throw InvalidInput("segment " + std::to_string(s + 1) + " has no players");
      table.opt[s][t] = best_value;
      table.first_mover[s][t] = best;
    }
  }
  return finish(instance, std::move(table));
}

std::vector<int> ResolvedSet::segments() const {
  std::vector<int> out;
  for (std::size_t j = 1; j < edge.size(); ++j) {
    if (edge[j]) out.push_back(static_cast<int>(j));
  }
  return out;
}

ResolvedSet resolved_at(const SppInstance& instance, const Profile& profile) {
  const int m = instance.num_segments();
  ResolvedSet rs;
  rs.edge.assign(m + 1, std::nullopt);
  for (int j = 1; j <= m; ++j) {
    std::vector<int> picks;
    for (int i = 0; i < instance.num_players(); ++i) {
      if (!instance.covers(i, j)) continue;
      for (int e : segment_best_response(instance, profile, i, j)) picks.push_back(e);
    }
    std::sort(picks.begin(), picks.end());
    picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
    if (picks.size() == 1) rs.edge[j] = picks.front();
  }
  return rs;
}

ResolvedSet resolved_segments(const SppInstance& instance, const Trace& trace, std::size_t prefix_length) {
  if (prefix_length > trace.moves.size()) throw InvalidInput("trace prefix longer than the trace");
  if (trace.initial != instance.initial) throw InvalidInput("trace does not start at the instance's profile");
  ResolvedSet rs = resolved_at(instance, instance.initial);
  Profile cur = instance.initial;
  for (std::size_t k = 0; k < prefix_length; ++k) {
    const Move& mv = trace.moves[k];
    cur = apply_move(cur, mv.player, mv.to);
    for (int j = instance.source[mv.player] + 1; j <= instance.target[mv.player]; ++j) {
      if (!rs.edge[j]) rs.edge[j] = instance.edge_in_segment(cur, mv.player, j);
    }
  }
  return rs;
}

}  // namespace brd
