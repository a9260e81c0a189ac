#pragma once

#include "brd/network.hpp"
#include "brd/oracle.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace brd {

// A parameterized instance with its initial profile and the quantities it is
// built to exhibit. Constructors check those quantities and throw
// FixtureValidationError when any of them does not hold.
struct Fixture {
  std::string name;
  std::map<std::string, std::string> params;
  bool reconstructed = false;  // some costs were chosen to satisfy the stated quantities
  std::optional<NetworkGame> network;
  Game game;
  Profile initial;
  std::map<std::string, Rational> expected;
  // Forced (player, strategy) moves exhibiting a particular sequence.
  std::vector<std::pair<int, int>> script;
};

struct FixturePair {
  Fixture a;
  Fixture b;
};

// Three parallel edges: top cost 1 (one player), bottom 1 - eps (n - 1 players), middle 1/n (empty).
Fixture fig2_maxcost(int n, const Rational& eps);

// m segments and n = m players; player i holds <e_1..e_{i-1}, e'_i> towards u_i.
// Segment j: upper e_j of cost n - j, lower e'_j of cost 1 + eps; segment n has only e'_n.
Fixture fig3_minpath_chain(int m, const Rational& eps);

// m segments with lower edges 2^i (one single-segment player each) and upper
// edges 2^{m+i-1} carrying 2^{m-1} full-span players.
Fixture fig4_minpath_exp(int m);

// Extension-parallel pair in which the same two state vectors call for opposite choices.
// delta is the cost of the t -> t' link.
FixturePair fig5_ep_pair(int n, const Rational& delta = Rational(1, 100));

// Four parallel links around a partition instance a_1..a_k.
Fixture fig6_weighted_partition(const std::vector<Rational>& a, const Rational& eps, const Rational& C);

// Weighted parallel links: G_a rewards moving the weight-2 player first, G_b a unit player.
FixturePair fig7_weighted_local_pair(int r, const Rational& eps, const Rational& C);

// Weighted two-segment instance with k players of weight 1 + 2/k and k + 1 unit players.
Fixture fig8_weighted_minpath(int k, const Rational& eps);

// Identical machines with linear loads; both instances share the initial load vector.
FixturePair fig9_sched_pair(int m, const Rational& eps);

// Conflicting congestion with B^{1/3} machines of load B^{1/3} and one of load B.
Fixture appB_coco(const Rational& B);

// Lookup by name for the command line. Parameters use the constructor names
// (n, m, k, r, eps, delta, C, a, B); scenario selects a or b for pairs.
Fixture make_fixture(const std::string& name, const std::map<std::string, std::string>& params);
const std::vector<std::string>& fixture_names();

}  // namespace brd
