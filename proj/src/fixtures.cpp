#include "brd/fixtures.hpp"

#include "brd/errors.hpp"
#include "brd/rules.hpp"
#include "brd/scheduling.hpp"

#include <algorithm>
#include <functional>

namespace brd {

namespace {

constexpr std::size_t kValidationStates = 400000;

void require(bool ok, const Fixture& f, const std::string& what) {
  if (!ok) throw FixtureValidationError(f.name + ": " + what);
}

void require_eq(const Rational& got, const Rational& want, const Fixture& f, const std::string& what) {
  if (got != want) {
    throw FixtureValidationError(f.name + ": " + what + " is " + to_string(got) + ", expected " + to_string(want));
  }
}

std::optional<ReachabilityGraph> try_graph(const Game& game, const Profile& p) {
  try {
    return ReachabilityGraph(game, p, OracleOptions{kValidationStates, 1});
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
}

Rational min_cost(const ReachabilityGraph& g) {
  const auto& c = g.equilibrium_costs();
  return *std::min_element(c.begin(), c.end());
}

Rational max_cost(const ReachabilityGraph& g) {
  const auto& c = g.equilibrium_costs();
  return *std::max_element(c.begin(), c.end());
}

Rational pow2(int e) { return Rational(Integer(1) << e); }

std::string text(const Rational& r) { return to_string(r); }

int path_of(const NetworkGame& ng, int player, const std::vector<int>& ids) {
  return strategy_from_edge_ids(ng, player, ids);
}

void attach(Fixture& f, NetworkGame ng, Profile p0) {
  f.game = ng.game;
  f.network = std::move(ng);
  f.initial = std::move(p0);
  validate_profile(f.game, f.initial);
}

// Cheapest equilibrium reachable once the player has moved first, over all
// best responses she may pick.
std::optional<Rational> best_after(const Game& g, const Profile& p0, int player) {
  std::optional<Rational> best;
  for (int to : best_response(g, p0, player)) {
    auto graph = try_graph(g, apply_move(p0, player, to));
    if (!graph) return std::nullopt;
    Rational c = min_cost(*graph);
    if (!best || c < *best) best = c;
  }
  return best;
}

std::optional<Rational> worst_after(const Game& g, const Profile& p0, int player) {
  std::optional<Rational> worst;
  for (int to : best_response(g, p0, player)) {
    auto graph = try_graph(g, apply_move(p0, player, to));
    if (!graph) return std::nullopt;
    Rational c = max_cost(*graph);
    if (!worst || c > *worst) worst = c;
  }
  return worst;
}

void check_suboptimal(const Fixture& f, const std::vector<int>& want) {
  require(suboptimal_players(f.game, f.initial) == want, f, "unexpected set of suboptimal players");
}

void check_vector(const Fixture& f, int player, const NfgStateVector& want, const std::string& label) {
  auto v = nfg_state_vector(f.game, f.initial, player);
  require(v == want, f, "state vector of player " + std::to_string(player + 1) + " differs from " + label);
}

// Makespan after adding count jobs of the given size one at a time to the least loaded machine.
Rational spread_makespan(std::vector<Rational> loads, int count, const Rational& size) {
  for (int q = 0; q < count; ++q) *std::min_element(loads.begin(), loads.end()) += size;
  return *std::max_element(loads.begin(), loads.end());
}

void check_oracle_best(const Fixture& f) {
  if (auto g = try_graph(f.game, f.initial)) require_eq(min_cost(*g), f.expected.at("best_cost"), f, "best reachable cost");
}

}  // namespace

Fixture fig2_maxcost(int n, const Rational& eps) {
  if (n < 2) throw InvalidInput("fig2 needs n >= 2");
  if (eps <= 0 || eps >= Rational(1, n)) throw InvalidInput("fig2 needs 0 < eps < 1/n");
  Fixture f;
  f.name = "fig2";
  f.params = {{"n", std::to_string(n)}, {"eps", text(eps)}};
  f.reconstructed = true;
  Network net = parallel_edges({Rational(1), Rational(1, n), 1 - eps});
  std::vector<PlayerSpec> players(n, PlayerSpec{net.source, net.sink, 1});
  NetworkGame ng = make_network_game(net, players, false);
  Profile p0(n, path_of(ng, 0, {3}));
  p0[0] = path_of(ng, 0, {1});
  attach(f, std::move(ng), p0);
  f.expected = {{"max_cost_cost", 1 - eps}, {"best_cost", Rational(1, n)}};

  Trace t = run_brd(f.game, f.initial, MaxCostRule{});
  require(!t.moves.empty() && t.moves.front().player == 0, f, "max-cost does not move the top player first");
  require_eq(social_cost(f.game, t.terminal), f.expected["max_cost_cost"], f, "max-cost terminal cost");
  if (auto g = try_graph(f.game, f.initial)) {
    require_eq(min_cost(*g), f.expected["best_cost"], f, "best reachable cost");
    // With two players a bottom player may also join the top edge at equal cost.
    if (n > 2) {
      require(g->equilibria().size() == 2, f, "expected exactly two reachable equilibria");
      require_eq(max_cost(*g), 1 - eps, f, "worst reachable cost");
    }
  }
  return f;
}

Fixture fig3_minpath_chain(int m, const Rational& eps) {
  if (m < 2) throw InvalidInput("fig3 needs m >= 2");
  if (eps <= 0 || eps >= 1) throw InvalidInput("fig3 needs 0 < eps < 1");
  const int n = m;
  Fixture f;
  f.name = "fig3";
  f.params = {{"m", std::to_string(m)}, {"eps", text(eps)}};
  Network net = parallel_edges({Rational(n - 1), 1 + eps});
  for (int j = 2; j < n; ++j) net = compose_series(net, parallel_edges({Rational(n - j), 1 + eps}));
  net = compose_series(net, single_edge(1 + eps));
  auto spp = spp_structure(net);
  std::vector<PlayerSpec> players;
  for (int i = 1; i <= n; ++i) players.push_back(PlayerSpec{spp->vertices[0], spp->vertices[i], 1});
  NetworkGame ng = make_network_game(net, players, false);
  // Segment j < n: upper e_j has id 2j - 1, lower e'_j has id 2j; e'_n has id 2n - 1.
  auto upper = [](int j) { return 2 * j - 1; };
  auto lower = [n](int j) { return j == n ? 2 * n - 1 : 2 * j; };
  Profile p0(n);
  for (int i = 1; i <= n; ++i) {
    std::vector<int> ids;
    for (int j = 1; j < i; ++j) ids.push_back(upper(j));
    ids.push_back(lower(i));
    p0[i - 1] = path_of(ng, i - 1, ids);
  }
  attach(f, std::move(ng), p0);
  f.expected = {{"min_path_cost", Rational((n - 1) * n, 2) + 1 + eps},
                {"all_lower_cost", n * (1 + eps)},
                {"best_cost", n + (n - 1) * eps}};

  for (int i = 1; i <= n; ++i) {
    auto v = nfg_state_vector(f.game, f.initial, i - 1);
    require_eq(v.current_cost, i + eps, f, "initial cost of player " + std::to_string(i));
    if (i < n) require_eq(v.br_path_cost, n - 1 + (i - 1) * eps, f, "best-response path cost of player " + std::to_string(i));
  }
  Trace t = run_brd(f.game, f.initial, MinPathRule{});
  require_eq(social_cost(f.game, t.terminal), f.expected["min_path_cost"], f, "min-path terminal cost");
  Trace lower_first = replay_moves(
      f.game, f.initial, {{n - 1, preferred_response(f.game, best_response(f.game, f.initial, n - 1))}});
  complete_to_nash(f.game, lower_first);
  require_eq(social_cost(f.game, lower_first.terminal), f.expected["all_lower_cost"], f,
             "cost after player n moves first");
  check_oracle_best(f);
  return f;
}

Fixture fig4_minpath_exp(int m) {
  if (m < 1 || m > 12) throw InvalidInput("fig4 needs 1 <= m <= 12");
  Fixture f;
  f.name = "fig4";
  f.params = {{"m", std::to_string(m)}};
  // Segment i: lower e_i (id 2i - 1) costs 2^i, upper e'_i (id 2i) costs 2^{m+i-1}.
  Network net = parallel_edges({pow2(1), pow2(m)});
  for (int i = 2; i <= m; ++i) net = compose_series(net, parallel_edges({pow2(i), pow2(m + i - 1)}));
  auto spp = spp_structure(net);
  std::vector<PlayerSpec> players;
  for (int i = 1; i <= m; ++i) players.push_back(PlayerSpec{spp->vertices[i - 1], spp->vertices[i], 1});
  const int uppers = 1 << (m - 1);
  for (int k = 0; k < uppers; ++k) players.push_back(PlayerSpec{spp->vertices[0], spp->vertices[m], 1});
  NetworkGame ng = make_network_game(net, players, false);
  Profile p0;
  for (int i = 1; i <= m; ++i) p0.push_back(path_of(ng, i - 1, {2 * i - 1}));
  std::vector<int> upper_path;
  for (int i = 1; i <= m; ++i) upper_path.push_back(2 * i);
  for (int k = 0; k < uppers; ++k) p0.push_back(path_of(ng, m + k, upper_path));
  attach(f, std::move(ng), p0);
  f.expected = {{"min_path_cost", pow2(2 * m) - pow2(m)}, {"best_cost", pow2(m + 1) - 2}};

  for (int i = 0; i < m; ++i) {
    auto v = nfg_state_vector(f.game, f.initial, i);
    require_eq(v.br_path_cost, pow2(m + i), f, "best-response path cost of player " + std::to_string(i + 1));
  }
  require_eq(nfg_state_vector(f.game, f.initial, m).br_path_cost, pow2(m + 1) - 2, f,
             "best-response path cost of an upper player");
  Trace t = run_brd(f.game, f.initial, MinPathRule{});
  for (int i = 0; i < m; ++i) {
    require(static_cast<int>(t.moves.size()) > i && t.moves[i].player == i, f,
            "min-path does not move players 1..m first, in order");
  }
  require_eq(social_cost(f.game, t.terminal), f.expected["min_path_cost"], f, "min-path terminal cost");
  check_oracle_best(f);
  return f;
}

FixturePair fig5_ep_pair(int n, const Rational& delta) {
  if (n < 5) throw InvalidInput("fig5 needs n >= 5");
  if (delta <= 0 || delta >= Rational(1, 10)) throw InvalidInput("fig5 needs 0 < delta < 1/10");
  auto build = [&](bool second) {
    Fixture f;
    f.name = second ? "fig5b" : "fig5a";
    f.params = {{"n", std::to_string(n)}, {"delta", text(delta)}};
    f.reconstructed = true;
    Network net;
    net.node_names = {"s", "a", "t", "t'"};
    net.source = 0;
    net.sink = 3;
    Rational bottom = second ? Rational(13, 2) * (n - 4) : Rational(37, 5) * (n - 4);
    net.edges = {Edge{1, 0, 1, 24}, Edge{2, 1, 2, 10}, Edge{3, 0, 2, 30}, Edge{4, 2, 3, delta}, Edge{5, 0, 3, bottom}};
    if (second) net.edges.push_back(Edge{6, 1, 2, 10});
    std::vector<PlayerSpec> players;
    players.push_back(PlayerSpec{0, second ? 2 : 1, 1});
    for (int i = 2; i <= 4; ++i) players.push_back(PlayerSpec{0, 2, 1});
    for (int i = 5; i <= n; ++i) players.push_back(PlayerSpec{0, 3, 1});
    NetworkGame ng = make_network_game(net, players, false);
    Profile p0;
    p0.push_back(path_of(ng, 0, second ? std::vector<int>{1, 2} : std::vector<int>{1}));
    p0.push_back(path_of(ng, 1, second ? std::vector<int>{1, 6} : std::vector<int>{1, 2}));
    p0.push_back(path_of(ng, 2, {3}));
    p0.push_back(path_of(ng, 3, {3}));
    for (int i = 5; i <= n; ++i) p0.push_back(path_of(ng, i - 1, {5}));
    attach(f, std::move(ng), p0);
    return f;
  };
  const NfgStateVector v2{22, 34, 10, 30, std::nullopt};
  const NfgStateVector v3{15, 30, 13, 34, std::nullopt};
  FixturePair pair{build(false), build(true)};
  Fixture& a = pair.a;
  Fixture& b = pair.b;
  a.expected = {{"v2_first_cost", 54 + Rational(37, 5) * (n - 4)}, {"v3_first_cost", 34 + delta}, {"best_cost", 34 + delta}};
  b.expected = {{"v3_first_cost", 34 + Rational(13, 2) * (n - 4)}, {"v2_first_cost", 30 + delta}, {"best_cost", 30 + delta}};

  check_suboptimal(a, {1, 2, 3});
  check_vector(a, 1, v2, "v2");
  check_vector(a, 2, v3, "v3");
  check_suboptimal(b, {0, 1, 2, 3});
  check_vector(b, 0, v2, "v2");
  check_vector(b, 1, v2, "v2");
  check_vector(b, 2, v3, "v3");
  for (Fixture* f : {&a, &b}) {
    int owner2 = f == &a ? 1 : 0;
    for (auto [player, key] : {std::pair<int, const char*>{owner2, "v2_first_cost"}, {2, "v3_first_cost"}}) {
      auto lo = best_after(f->game, f->initial, player);
      auto hi = worst_after(f->game, f->initial, player);
      if (lo && hi) {
        require_eq(*lo, f->expected[key], *f, std::string("cheapest equilibrium after ") + key);
        require_eq(*hi, f->expected[key], *f, std::string("dearest equilibrium after ") + key);
      }
    }
    check_oracle_best(*f);
  }
  return pair;
}

Fixture fig6_weighted_partition(const std::vector<Rational>& a, const Rational& eps, const Rational& C) {
  if (a.empty() || a.size() > 16) throw InvalidInput("fig6 needs between 1 and 16 partition weights");
  for (const auto& x : a) {
    if (x <= 0 || x >= 1) throw InvalidInput("fig6 partition weights must lie in (0, 1)");
  }
  const Rational amin = *std::min_element(a.begin(), a.end());
  if (eps <= 0 || eps >= amin / 6) throw InvalidInput("fig6 needs 0 < eps < min(a)/6");
  if (C <= 9 + eps) throw InvalidInput("fig6 needs C > 9 + eps");
  const int k = static_cast<int>(a.size());
  Fixture f;
  f.name = "fig6";
  {
    std::string list;
    for (const auto& x : a) list += (list.empty() ? "" : ",") + text(x);
    f.params = {{"a", list}, {"eps", text(eps)}, {"C", text(C)}};
  }
  Network net = parallel_edges({C, 3 + eps, 9 + eps, Rational(2)});
  std::vector<PlayerSpec> players{PlayerSpec{net.source, net.sink, 2}};
  for (const auto& x : a) players.push_back(PlayerSpec{net.source, net.sink, x});
  for (int u = 0; u < 6; ++u) players.push_back(PlayerSpec{net.source, net.sink, 1});
  NetworkGame ng = make_network_game(net, players, true);
  Profile p0{path_of(ng, 0, {1})};
  for (int i = 1; i <= k; ++i) p0.push_back(path_of(ng, i, {2}));
  for (int u = 0; u < 6; ++u) p0.push_back(path_of(ng, k + 1 + u, {3}));
  attach(f, std::move(ng), p0);

  std::optional<unsigned> subset;
  for (unsigned mask = 1; mask < (1u << k) && !subset; ++mask) {
    Rational sum = 0;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) sum += a[i];
    }
    if (sum == 1) subset = mask;
  }
  const int e3 = path_of(*f.network, 0, {3});
  const int e4 = path_of(*f.network, 0, {4});
  if (subset) {
    for (int i = 0; i < k; ++i) {
      if (*subset & (1u << i)) f.script.emplace_back(i + 1, e3);
    }
    f.script.emplace_back(0, e4);
    f.expected = {{"scripted_cost", Rational(2)}, {"best_cost", Rational(2)}};
    Trace t = replay_moves(f.game, f.initial, f.script);
    complete_to_nash(f.game, t);
    require_eq(social_cost(f.game, t.terminal), 2, f, "scripted terminal cost");
    check_oracle_best(f);
  } else if (auto g = try_graph(f.game, f.initial)) {
    require(min_cost(*g) > 2, f, "an equilibrium of cost 2 is reachable without a unit subset");
  }
  return f;
}

FixturePair fig7_weighted_local_pair(int r, const Rational& eps, const Rational& C) {
  if (r < 2) throw InvalidInput("fig7 needs r >= 2");
  if (eps <= 0) throw InvalidInput("fig7 needs eps > 0");
  if (C <= r) throw InvalidInput("fig7 needs C > r");
  auto build = [&](bool second) {
    Fixture f;
    f.name = second ? "fig7b" : "fig7a";
    f.params = {{"r", std::to_string(r)}, {"eps", text(eps)}, {"C", text(C)}};
    std::vector<Rational> costs{C, Rational(1), Rational(r)};
    if (second) costs.push_back(Rational(2, r) + eps);
    Network net = parallel_edges(costs);
    std::vector<PlayerSpec> players{PlayerSpec{net.source, net.sink, 2}};
    for (int i = 0; i < r + r * r + r; ++i) players.push_back(PlayerSpec{net.source, net.sink, 1});
    if (second) players.push_back(PlayerSpec{net.source, net.sink, Rational(4, r)});
    NetworkGame ng = make_network_game(net, players, true);
    Profile p0{path_of(ng, 0, {1})};
    for (int i = 0; i < r; ++i) p0.push_back(path_of(ng, 1 + i, {2}));
    for (int i = 0; i < r * r + r; ++i) p0.push_back(path_of(ng, 1 + r + i, {3}));
    if (second) p0.push_back(path_of(ng, static_cast<int>(players.size()) - 1, {4}));
    attach(f, std::move(ng), p0);
    return f;
  };
  FixturePair pair{build(false), build(true)};
  Fixture& ga = pair.a;
  Fixture& gb = pair.b;
  ga.expected = {{"v1_first_cost", Rational(1)}, {"v2_first_cost", Rational(r)}, {"best_cost", Rational(1)}};
  gb.expected = {{"v2_first_cost", Rational(2, r) + eps}, {"best_cost", Rational(2, r) + eps}};

  const NfgStateVector v1{C, C, Rational(2, r + 2), 1, Rational(2)};
  const NfgStateVector v2{Rational(1, r), 1, Rational(r, r * r + r + 1), Rational(r), Rational(1)};
  for (Fixture* f : {&ga, &gb}) {
    std::vector<int> sub{0};
    for (int i = 1; i <= r; ++i) sub.push_back(i);
    if (f == &gb) sub.push_back(gb.game.num_players() - 1);
    check_suboptimal(*f, sub);
    check_vector(*f, 0, v1, "v1");
    check_vector(*f, 1, v2, "v2");
  }
  for (auto [player, key] : {std::pair<int, const char*>{0, "v1_first_cost"}, {1, "v2_first_cost"}}) {
    auto lo = best_after(ga.game, ga.initial, player);
    if (lo) require_eq(*lo, ga.expected[key], ga, std::string("cheapest equilibrium after ") + key);
  }
  if (auto lo = best_after(gb.game, gb.initial, 1)) {
    require_eq(*lo, gb.expected["v2_first_cost"], gb, "cheapest equilibrium after v2_first_cost");
  }
  if (auto lo = best_after(gb.game, gb.initial, 0)) gb.expected["v1_first_cost"] = *lo;
  check_oracle_best(ga);
  check_oracle_best(gb);
  return pair;
}

Fixture fig8_weighted_minpath(int k, const Rational& eps) {
  if (k < 3) throw InvalidInput("fig8 needs k >= 3");
  const Rational l = 1 + Rational(2, k);
  const int r = k + 2;
  if (eps <= 0 || eps >= 1) throw InvalidInput("fig8 needs 0 < eps < 1");
  Fixture f;
  f.name = "fig8";
  f.params = {{"k", std::to_string(k)}, {"eps", text(eps)}};
  // E_1: k private edges (ids 1..k) and the shared lower edge (id k + 1).
  // E_2: the shared upper edge (id k + 2) and r - 1 private edges.
  std::vector<Rational> first(k, Rational(2 * r));
  first.push_back(Rational(r * (r - 2)) + eps);
  std::vector<Rational> second{Rational(r * r)};
  for (int u = 0; u < r - 1; ++u) second.push_back(Rational(2 * r));
  Network net = compose_series(parallel_edges(first), parallel_edges(second));
  std::vector<PlayerSpec> players;
  for (int i = 0; i < k; ++i) players.push_back(PlayerSpec{net.source, net.sink, l});
  for (int u = 0; u < r - 1; ++u) players.push_back(PlayerSpec{net.source, net.sink, 1});
  NetworkGame ng = make_network_game(net, players, true);
  Profile p0;
  for (int i = 0; i < k; ++i) p0.push_back(path_of(ng, i, {i + 1, k + 2}));
  for (int u = 0; u < r - 1; ++u) p0.push_back(path_of(ng, k + u, {k + 1, k + 3 + u}));
  attach(f, std::move(ng), p0);
  f.expected = {{"min_path_cost", Rational(r * r) + eps}, {"best_cost", Rational(4 * r)}, {"weight_ratio", l}};

  for (int i = 0; i < k; ++i) {
    require_eq(nfg_state_vector(f.game, f.initial, i).br_path_cost, Rational(r * r) + eps, f,
               "best-response path cost of a heavy player");
  }
  for (int u = 0; u < r - 1; ++u) {
    require_eq(nfg_state_vector(f.game, f.initial, k + u).br_path_cost, Rational(2 * r + r * r), f,
               "best-response path cost of a unit player");
  }
  Trace t = run_brd(f.game, f.initial, MinPathRule{});
  require_eq(social_cost(f.game, t.terminal), f.expected["min_path_cost"], f, "min-path terminal cost");
  Trace unit_first = replay_moves(
      f.game, f.initial, {{k, preferred_response(f.game, best_response(f.game, f.initial, k))}});
  complete_to_nash(f.game, unit_first);
  require_eq(social_cost(f.game, unit_first.terminal), f.expected["best_cost"], f, "cost after a unit player moves first");
  return f;
}

FixturePair fig9_sched_pair(int m, const Rational& eps) {
  if (m < 3) throw InvalidInput("fig9 needs m >= 3");
  if (eps <= 0 || eps >= Rational(m, 4)) throw InvalidInput("fig9 needs 0 < eps < m/4");
  const Rational count2 = (m + eps / 2) / (Rational(3, 2) * eps);
  const Rational count3 = (m - 2 * eps) / eps;
  if (denominator(count2) != 1 || denominator(count3) != 1) {
    throw InvalidInput("fig9 needs (m + eps/2)/(3eps/2) and (m - 2eps)/eps to be integers");
  }
  const int n2 = static_cast<int>(numerator(count2));
  const int n3 = static_cast<int>(numerator(count3));
  auto finish = [&](Fixture& f, const std::vector<std::pair<Rational, int>>& jobs) {
    std::vector<Rational> lengths;
    std::vector<int> machine;
    for (const auto& [len, mach] : jobs) {
      lengths.push_back(len);
      machine.push_back(mach);
    }
    f.game = make_linear_sched_game(m, lengths);
    f.initial = sched_profile(f.game, machine);
  };
  FixturePair pair;
  Fixture& a = pair.a;
  Fixture& b = pair.b;
  a.name = "fig9a";
  b.name = "fig9b";
  a.params = b.params = {{"m", std::to_string(m)}, {"eps", text(eps)}};
  const Rational big = m - eps;
  // Job ids in (a): 1, 2 long on M1, 3 short on M1, 4 long on M2, 5 the 3eps/2 job, then M3's eps jobs.
  std::vector<std::pair<Rational, int>> ja{{big, 0}, {big, 0}, {eps, 0}, {big, 1}, {Rational(3, 2) * eps, 1}};
  for (int q = 0; q < n3; ++q) ja.emplace_back(eps, 2);
  for (int j = 3; j < m; ++j) ja.emplace_back(Rational(m), j);
  finish(a, ja);
  // Job ids in (b): 1 long (m - eps) and 2 of length m on M1, then M2's 3eps/2 jobs, then the m - 2eps job.
  std::vector<std::pair<Rational, int>> jb{{big, 0}, {Rational(m), 0}};
  for (int q = 0; q < n2; ++q) jb.emplace_back(Rational(3, 2) * eps, 1);
  jb.emplace_back(m - 2 * eps, 2);
  for (int j = 3; j < m; ++j) jb.emplace_back(Rational(m), j);
  finish(b, jb);

  const Rational bad = 2 * m - 2 * eps;
  const Rational mean = m + 1 - 5 * eps / (2 * m);
  // The long jobs settle first; the small jobs then fill the machines evenly.
  std::vector<Rational> base_a(m, Rational(m));
  base_a[0] = m - eps;
  base_a[1] = m + eps / 2;
  base_a[2] = m - eps;
  std::vector<Rational> base_b(m, Rational(m));
  base_b[1] = m - eps;
  base_b[2] = m - 2 * eps;
  const Rational good_a = spread_makespan(base_a, n3 + 1, eps);
  const Rational good_b = spread_makespan(base_b, n2, Rational(3, 2) * eps);
  a.expected = {{"vprime_first_cost", good_a}, {"vdoubleprime_first_cost", bad}, {"vhat_first_cost", bad},
                {"best_cost", good_a}, {"mean_load", mean}};
  const Rational bad_b = 2 * m - 3 * eps;  // both long jobs end up beside the m - 2eps job
  b.expected = {{"vdoubleprime_first_cost", good_b}, {"vprime_first_cost", bad_b}, {"long_first_cost", bad_b},
                {"best_cost", good_b}, {"mean_load", mean}};

  require(machine_loads(a.game, a.initial) == machine_loads(b.game, b.initial), a, "initial load vectors differ");
  check_suboptimal(a, {0, 1, 2, 4});
  std::vector<int> sub_b{0, 1};
  for (int q = 0; q < n2; ++q) sub_b.push_back(2 + q);
  check_suboptimal(b, sub_b);

  auto check_after = [](const Fixture& f, int job, const char* key, bool exact) {
    auto lo = best_after(f.game, f.initial, job);
    if (!lo) return;
    require_eq(*lo, f.expected.at(key), f, std::string("cheapest equilibrium after ") + key);
    if (exact) {
      auto hi = worst_after(f.game, f.initial, job);
      if (hi) require_eq(*hi, f.expected.at(key), f, std::string("dearest equilibrium after ") + key);
    }
  };
  check_after(a, 0, "vprime_first_cost", false);
  check_after(a, 4, "vdoubleprime_first_cost", true);
  check_after(a, 2, "vhat_first_cost", true);
  check_after(b, 2, "vdoubleprime_first_cost", false);
  check_after(b, 0, "vprime_first_cost", true);
  check_after(b, 1, "long_first_cost", true);
  check_oracle_best(a);
  check_oracle_best(b);
  return pair;
}

Fixture appB_coco(const Rational& B) {
  Integer root;
  if (!integer_cube_root(B, root) || root < 2) throw InvalidInput("appB needs B = k^3 with k >= 2");
  const int k = static_cast<int>(root);
  const int n = k * k + k * k * k;
  Fixture f;
  f.name = "appB";
  f.params = {{"B", text(B)}};
  f.game = make_coco_game(k + 1, n, B);
  std::vector<int> machine;
  for (int j = 0; j < k; ++j) {
    for (int q = 0; q < k; ++q) machine.push_back(j);
  }
  for (int q = 0; q < k * k * k; ++q) machine.push_back(k);
  f.initial = sched_profile(f.game, machine);
  f.expected = {{"two_machine_cost", conflict_cost(Rational(n, 2), B)},
                {"best_cost", conflict_cost(Rational(n, k + 1), B)},
                {"max_active", Rational(k + 1)}};

  require(max_active_machines(f.game, f.initial) == k + 1, f, "not every machine can stay active");
  Trace t = run_brd(f.game, f.initial, SOptRule{});
  require(active_machine_count(f.game, t.terminal) == k + 1, f, "s-opt does not keep every machine active");
  require_eq(social_cost(f.game, t.terminal), f.expected["best_cost"], f, "s-opt terminal cost");
  if (auto g = try_graph(f.game, f.initial)) {
    require_eq(min_cost(*g), f.expected["best_cost"], f, "best reachable cost");
    const auto& costs = g->equilibrium_costs();
    require(std::find(costs.begin(), costs.end(), f.expected["two_machine_cost"]) != costs.end(), f,
            "two-machine equilibrium not reachable");
  }
  return f;
}

namespace {

const std::string& param(const std::map<std::string, std::string>& p, const std::string& key, const std::string& fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

int int_param(const std::map<std::string, std::string>& p, const std::string& key, const std::string& fallback) {
  Rational v = parse_rational(param(p, key, fallback));
  if (denominator(v) != 1) throw InvalidInput("parameter " + key + " must be an integer");
  if (abs(v) > 1000000) throw InvalidInput("parameter " + key + " out of range");
  return static_cast<int>(numerator(v));
}

Rational rat_param(const std::map<std::string, std::string>& p, const std::string& key, const std::string& fallback) {
  return parse_rational(param(p, key, fallback));
}

Fixture pick(FixturePair pair, const std::map<std::string, std::string>& p) {
  const std::string& s = param(p, "scenario", "a");
  if (s == "a") return std::move(pair.a);
  if (s == "b") return std::move(pair.b);
  throw InvalidInput("scenario must be a or b");
}

void check_keys(const std::map<std::string, std::string>& p, std::vector<std::string> allowed) {
  for (const auto& [key, value] : p) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidInput("unknown fixture parameter: " + key);
    }
  }
}

}  // namespace

Fixture make_fixture(const std::string& name, const std::map<std::string, std::string>& p) {
  if (name == "fig2") {
    check_keys(p, {"n", "eps"});
    return fig2_maxcost(int_param(p, "n", "5"), rat_param(p, "eps", "1/100"));
  }
  if (name == "fig3") {
    check_keys(p, {"m", "eps"});
    return fig3_minpath_chain(int_param(p, "m", "4"), rat_param(p, "eps", "1/100"));
  }
  if (name == "fig4") {
    check_keys(p, {"m"});
    return fig4_minpath_exp(int_param(p, "m", "3"));
  }
  if (name == "fig5") {
    check_keys(p, {"n", "delta", "scenario"});
    return pick(fig5_ep_pair(int_param(p, "n", "6"), rat_param(p, "delta", "1/100")), p);
  }
  if (name == "fig6") {
    check_keys(p, {"a", "eps", "C"});
    std::vector<Rational> a;
    std::string list = param(p, "a", "1/2,1/2");
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = list.find(',', start);
      a.push_back(parse_rational(list.substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return fig6_weighted_partition(a, rat_param(p, "eps", "1/1000"), rat_param(p, "C", "100"));
  }
  if (name == "fig7") {
    check_keys(p, {"r", "eps", "C", "scenario"});
    return pick(fig7_weighted_local_pair(int_param(p, "r", "4"), rat_param(p, "eps", "1/100"), rat_param(p, "C", "100")), p);
  }
  if (name == "fig8") {
    check_keys(p, {"k", "eps"});
    return fig8_weighted_minpath(int_param(p, "k", "10"), rat_param(p, "eps", "1/100"));
  }
  if (name == "fig9") {
    check_keys(p, {"m", "eps", "scenario"});
    return pick(fig9_sched_pair(int_param(p, "m", "4"), rat_param(p, "eps", "1/10")), p);
  }
  if (name == "appB") {
    check_keys(p, {"B"});
    return appB_coco(rat_param(p, "B", "27"));
  }
  throw InvalidInput("unknown fixture: " + name);
}

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "appB"};
  return names;
}

}  // namespace brd
