#pragma once

#include "brd/game.hpp"
#include "brd/state_vector.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace brd {

struct Edge {
  int id = 0;  // external identifier; paths are ordered by edge-id sequence
  int tail = 0;
  int head = 0;
  Rational cost;
};

// Directed multigraph with optional designated terminals used by composition.
struct Network {
  std::vector<std::string> node_names;
  std::vector<Edge> edges;
  int source = -1;
  int sink = -1;

  int num_nodes() const { return static_cast<int>(node_names.size()); }
  int node_index(const std::string& name) const;  // throws InvalidInput
  int edge_index(int id) const;                   // throws InvalidInput
};

enum class TopologyKind { ParallelEdge, Spp, Ep, General };

struct SppStructure {
  std::vector<int> vertices;               // u_0 .. u_m
  std::vector<std::vector<int>> segments;  // edge indices of E_1 .. E_m
  int segment_of_vertex(int node) const;   // index j with u_j == node, or -1
};

// Two-terminal building blocks.
Network single_edge(const Rational& cost);
Network parallel_edges(const std::vector<Rational>& costs);
Network compose_series(const Network& g1, const Network& g2);
Network compose_parallel(const Network& g1, const Network& g2);
enum class Side { Before, After };
// Before: e -> G; After: G -> e.
Network extend_with_edge(const Network& g, const Rational& cost, Side side);

std::optional<SppStructure> spp_structure(const Network& net);
bool is_spp(const Network& net);
bool is_ep(const Network& net);
bool is_parallel_edge(const Network& net);
TopologyKind classify(const Network& net);

inline constexpr std::size_t kDefaultPathCap = 10000;

// All simple directed s->t paths as edge-index sequences, ordered
// lexicographically by edge-id sequence.
std::vector<std::vector<int>> enumerate_paths(const Network& net, int s, int t,
                                              std::size_t cap = kDefaultPathCap);

struct PlayerSpec {
  int source = 0;
  int target = 0;
  Rational weight = 1;
};

struct NetworkGame {
  Network network;
  std::vector<PlayerSpec> players;
  bool weighted = false;
  Game game;
  // paths[i][s] is the edge-index sequence of strategy s of player i.
  std::vector<std::vector<std::vector<int>>> paths;
};

NetworkGame make_network_game(Network net, std::vector<PlayerSpec> players, bool weighted,
                              std::size_t cap = kDefaultPathCap);

// Strategy index of a path given by edge ids, for player i. Throws InvalidInput.
int strategy_from_edge_ids(const NetworkGame& ng, int player, const std::vector<int>& edge_ids);
std::vector<int> edge_ids_of(const NetworkGame& ng, int player, int strategy);

// Best-response paths found by a cheapest-path search on marginal costs:
// c_e / (l_e^{-i} + 1), or w_i c_e / (W_e^{-i} + w_i) when weighted.
std::vector<int> br_path(const NetworkGame& ng, const Profile& profile, int player);

NfgStateVector nfg_state_vector(const Game& game, const Profile& profile, int player);

}  // namespace brd
