#pragma once

#include "brd/dynamics.hpp"
#include "brd/network.hpp"

#include <optional>
#include <vector>

namespace brd {

// Unweighted network game on a series of parallel-edge segments E_1..E_m with
// vertices u_0..u_m. Player i uses the segments s_i+1..t_i.
struct SppInstance {
  NetworkGame game;
  SppStructure spp;
  std::vector<int> source;  // s_i, as an index into spp.vertices
  std::vector<int> target;  // t_i
  Profile initial;

  int num_segments() const { return static_cast<int>(spp.segments.size()); }
  int num_players() const { return static_cast<int>(source.size()); }
  bool covers(int player, int segment) const {  // segment is 1-based
    return source[player] < segment && segment <= target[player];
  }
  // Edge index used by the player in the 1-based segment, or -1 outside her interval.
  int edge_in_segment(const Profile& profile, int player, int segment) const;
};

// Throws UnsupportedModel for weighted games or non-SPP networks.
SppInstance make_spp_instance(const NetworkGame& game, const Profile& initial);

bool is_single_source(const SppInstance& instance);
bool is_proper_intervals(const SppInstance& instance);

// Best-response edges of a player inside one segment under the given profile, ascending.
std::vector<int> segment_best_response(const SppInstance& instance, const Profile& profile, int player,
                                       int segment);

struct DpTable {
  int segments = 0;
  // opt[s][t] and first_mover[s][t] describe the subgame on the segments
  // s+1..t; first_mover is -1 when s == t.
  std::vector<std::vector<Rational>> opt;
  std::vector<std::vector<int>> first_mover;
  // prefix_cost[i][s][t]: cost of player i's best-response edges, under the
  // initial loads, on the segments of (s, t] inside her interval.
  std::vector<std::vector<std::vector<Rational>>> prefix_cost;
  // planned_edge[i][j]: the edge player i selects in 1-based segment j when she resolves it.
  std::vector<std::vector<int>> planned_edge;

  // Optimum on the last j segments.
  const Rational& suffix_opt(int j) const { return opt[segments - j][segments]; }
  int suffix_first_mover(int j) const { return first_mover[segments - j][segments]; }
};

struct DpResult {
  DpTable table;
  Rational opt;               // social cost of the best reachable equilibrium
  std::vector<int> skeleton;  // first movers in recovery order
  Trace trace;                // skeleton moves followed by clean-up moves
};

// Both throw UnsupportedModel when a player has several best-response edges in
// a segment of her interval at the initial profile: the first mover of a
// segment then no longer fixes its equilibrium edge.
DpResult dp_single_source(const SppInstance& instance);  // InvalidInput unless single-source
DpResult dp_proper_intervals(const SppInstance& instance);  // InvalidInput unless proper

struct ResolvedSet {
  // edge[j] for 1-based segment j (index 0 unused); empty when unresolved.
  std::vector<std::optional<int>> edge;
  std::vector<int> segments() const;  // resolved segment numbers, ascending
};

// Segments whose edge every covering player would pick on her next best response.
ResolvedSet resolved_at(const SppInstance& instance, const Profile& profile);
// Resolution state after the first prefix_length moves of the trace.
ResolvedSet resolved_segments(const SppInstance& instance, const Trace& trace, std::size_t prefix_length);

}  // namespace brd
