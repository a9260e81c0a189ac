#include "brd/dynamics.hpp"

#include "brd/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace brd {

namespace {

struct Analysis {
  LoadMap loads;
  std::vector<int> suboptimal;
  std::vector<std::vector<int>> br;  // aligned with suboptimal
  std::vector<StateVector> vectors;  // aligned with suboptimal
};

Analysis analyze(const Game& game, const Profile& p, bool with_vectors) {
  Analysis a;
  a.loads = compute_loads(game, p);
  for (int i = 0; i < game.num_players(); ++i) {
    auto br = best_response(game, p, a.loads, i);
    if (std::binary_search(br.begin(), br.end(), p[i])) continue;
    a.suboptimal.push_back(i);
    if (with_vectors) {
      int pick = preferred_response(game, br);
      Cost cur = deviation_cost(game, p, a.loads, i, p[i]);
      Cost after = deviation_cost(game, p, a.loads, i, pick);
      if (game.is_scheduling()) {
        SchedStateVector v;
        v.length = game.weight[i];
        v.machine = p[i];
        v.loads = a.loads.weight;
        v.current_cost = cur;
        v.br_cost = after;
        a.vectors.emplace_back(std::move(v));
      } else {
        NfgStateVector v;
        v.current_cost = cur;
        v.current_path_cost = strategy_resource_cost(game, game.strategy_of(p, i));
        v.br_cost = after;
        v.br_path_cost = strategy_resource_cost(game, game.strategies[i][pick]);
        if (game.model == CostModel::WeightedShare) v.weight = game.weight[i];
        a.vectors.emplace_back(std::move(v));
      }
    }
    a.br.push_back(std::move(br));
  }
  return a;
}

std::string encode(const Profile& p, const std::string& rule_state) {
  std::string key(reinterpret_cast<const char*>(p.data()), p.size() * sizeof(int));
  key += '|';
  key += rule_state;
  return key;
}

Move make_move(const Game& game, const Profile& before, const LoadMap& loads, int player, int to, int step) {
  Move mv;
  mv.step = step;
  mv.player = player;
  mv.from = before[player];
  mv.to = to;
  mv.cost_before = deviation_cost(game, before, loads, player, before[player]);
  mv.cost_after = deviation_cost(game, before, loads, player, to);
  mv.profile_hash = profile_hash_hex(apply_move(before, player, to));
  return mv;
}

std::vector<int> checked_choice(const DeviatorRule& rule, const Game& game, const Profile& p, const Analysis& a) {
  RuleInput in{game, p, a.suboptimal, a.vectors};
  auto choice = rule.choose(in);
  if (choice.empty()) throw RuleViolation("rule " + rule.name() + " reported equilibrium while players can improve");
  std::sort(choice.begin(), choice.end());
  choice.erase(std::unique(choice.begin(), choice.end()), choice.end());
  for (int c : choice) {
    if (!std::binary_search(a.suboptimal.begin(), a.suboptimal.end(), c)) {
      throw RuleViolation("rule " + rule.name() + " chose player " + std::to_string(c + 1) + " who cannot improve");
    }
  }
  return choice;
}

const std::vector<int>& br_of(const Analysis& a, int player) {
  auto it = std::lower_bound(a.suboptimal.begin(), a.suboptimal.end(), player);
  return a.br[it - a.suboptimal.begin()];
}

}  // namespace

std::vector<int> LocalRule::choose_vectors(const std::vector<StateVector>& vectors) const {
  std::vector<int> best;
  for (int k = 0; k < static_cast<int>(vectors.size()); ++k) {
    if (!eligible(vectors[k])) continue;
    if (best.empty()) {
      best.push_back(k);
      continue;
    }
    int c = compare(vectors[k], vectors[best.front()]);
    if (c > 0) {
      best.assign(1, k);
    } else if (c == 0) {
      best.push_back(k);
    }
  }
  return best;
}

std::vector<int> LocalRule::choose(const RuleInput& input) const {
  std::vector<int> out;
  for (int k : choose_vectors(input.vectors)) out.push_back(input.suboptimal[k]);
  return out;
}

Profile apply_move(const Profile& profile, int player, int to) {
  Profile next = profile;
  next[player] = to;
  return next;
}

Trace run_brd(const Game& game, const Profile& p0, const DeviatorRule& rule, TiePolicy policy, std::size_t max_steps) {
  if (!policy.deterministic()) throw InvalidInput("engine runs require a deterministic tie policy");
  if (!rule.accepts(game)) throw UnsupportedModel("rule " + rule.name() + " does not apply to this game");
  validate_profile(game, p0);
  auto r = rule.clone();
  Trace trace;
  trace.initial = p0;
  Profile p = p0;
  std::set<std::pair<Profile, std::string>> seen;
  seen.emplace(p, r->state_key());
  for (std::size_t step = 0;; ++step) {
    Analysis a = analyze(game, p, true);
    if (a.suboptimal.empty()) break;
    if (step >= max_steps) throw BudgetExceeded("step budget of " + std::to_string(max_steps) + " exhausted");
    int chosen = checked_choice(*r, game, p, a).front();
    int to = preferred_response(game, br_of(a, chosen));
    trace.moves.push_back(make_move(game, p, a.loads, chosen, to, static_cast<int>(step)));
    p[chosen] = to;
    r->on_move(chosen);
    if (!seen.emplace(p, r->state_key()).second) throw CycleDetected("best-response dynamics revisited a profile");
  }
  trace.terminal = p;
  trace.terminal_is_nash = true;
  return trace;
}

Trace replay_moves(const Game& game, const Profile& p0, const std::vector<std::pair<int, int>>& moves) {
  validate_profile(game, p0);
  Trace trace;
  trace.initial = p0;
  Profile p = p0;
  int step = 0;
  for (auto [player, to] : moves) {
    if (player < 0 || player >= game.num_players()) throw InvalidInput("unknown player in move list");
    LoadMap loads = compute_loads(game, p);
    auto br = best_response(game, p, loads, player);
    if (std::binary_search(br.begin(), br.end(), p[player])) {
      throw RuleViolation("player " + std::to_string(player + 1) + " cannot improve at step " + std::to_string(step));
    }
    if (!std::binary_search(br.begin(), br.end(), to)) {
      throw RuleViolation("move at step " + std::to_string(step) + " is not a best response");
    }
    trace.moves.push_back(make_move(game, p, loads, player, to, step++));
    p[player] = to;
  }
  trace.terminal = p;
  trace.terminal_is_nash = is_nash(game, p);
  return trace;
}

void complete_to_nash(const Game& game, Trace& trace, std::size_t max_steps) {
  Profile p = trace.terminal;
  std::size_t steps = 0;
  for (;;) {
    Analysis a = analyze(game, p, false);
    if (a.suboptimal.empty()) break;
    if (++steps > max_steps) throw BudgetExceeded("step budget exhausted while completing a trace");
    int chosen = a.suboptimal.front();
    int to = preferred_response(game, a.br.front());
    trace.moves.push_back(make_move(game, p, a.loads, chosen, to, static_cast<int>(trace.moves.size())));
    p[chosen] = to;
  }
  trace.terminal = p;
  trace.terminal_is_nash = true;
}

std::string verify_trace(const Game& game, const Trace& trace) {
  try {
    validate_profile(game, trace.initial);
  } catch (const InvalidInput& e) {
    return std::string("initial profile: ") + e.what();
  }
  Profile p = trace.initial;
  for (std::size_t k = 0; k < trace.moves.size(); ++k) {
    const Move& mv = trace.moves[k];
    std::string at = "move " + std::to_string(k) + ": ";
    if (mv.step != static_cast<int>(k)) return at + "step index out of sequence";
    if (mv.player < 0 || mv.player >= game.num_players()) return at + "unknown player";
    if (mv.from != p[mv.player]) return at + "old strategy does not match the profile";
    if (mv.to < 0 || mv.to >= static_cast<int>(game.strategies[mv.player].size())) return at + "unknown strategy";
    LoadMap loads = compute_loads(game, p);
    auto br = best_response(game, p, loads, mv.player);
    if (std::binary_search(br.begin(), br.end(), p[mv.player])) return at + "player could not strictly improve";
    if (!std::binary_search(br.begin(), br.end(), mv.to)) return at + "new strategy is not a best response";
    if (deviation_cost(game, p, loads, mv.player, p[mv.player]) != mv.cost_before) return at + "cost before mismatch";
    if (deviation_cost(game, p, loads, mv.player, mv.to) != mv.cost_after) return at + "cost after mismatch";
    p[mv.player] = mv.to;
    if (profile_hash_hex(p) != mv.profile_hash) return at + "profile hash mismatch";
  }
  if (p != trace.terminal) return "terminal profile does not match the replay";
  if (trace.terminal_is_nash != is_nash(game, p)) return "terminal equilibrium flag is wrong";
  return {};
}

RuleReach reachable_by_rule(const Game& game, const Profile& p0, const DeviatorRule& rule, TiePolicy policy,
                            std::size_t state_limit) {
  if (!rule.accepts(game)) throw UnsupportedModel("rule " + rule.name() + " does not apply to this game");
  validate_profile(game, p0);
  struct Node {
    Profile profile;
    std::unique_ptr<DeviatorRule> rule;
    int parent;
    Move via;
    std::vector<int> succ;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, int> index;
  auto root_rule = rule.clone();
  index.emplace(encode(p0, root_rule->state_key()), 0);
  nodes.push_back(Node{p0, std::move(root_rule), -1, Move{}, {}});
  std::map<Profile, int> equilibria;
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    Profile p = nodes[head].profile;
    Analysis a = analyze(game, p, true);
    if (a.suboptimal.empty()) {
      equilibria.emplace(p, static_cast<int>(head));
      continue;
    }
    auto choice = checked_choice(*nodes[head].rule, game, p, a);
    if (policy.rule == RuleTie::LowestId) choice.resize(1);
    for (int player : choice) {
      const auto& br = br_of(a, player);
      std::vector<int> targets = policy.br == BrTie::Preferred ? std::vector<int>{preferred_response(game, br)} : br;
      for (int to : targets) {
        auto next_rule = nodes[head].rule->clone();
        next_rule->on_move(player);
        Profile next = apply_move(p, player, to);
        std::string key = encode(next, next_rule->state_key());
        auto it = index.find(key);
        int id;
        if (it == index.end()) {
          if (nodes.size() >= state_limit) throw BudgetExceeded("state limit of " + std::to_string(state_limit) + " exceeded");
          id = static_cast<int>(nodes.size());
          index.emplace(std::move(key), id);
          Move mv = make_move(game, p, a.loads, player, to, 0);
          nodes.push_back(Node{std::move(next), std::move(next_rule), static_cast<int>(head), std::move(mv), {}});
        } else {
          id = it->second;
        }
        nodes[head].succ.push_back(id);
      }
    }
  }
  if (!game.unit_weights()) {
    // Iterative colouring DFS over the explored graph.
    std::vector<char> colour(nodes.size(), 0);
    for (std::size_t root = 0; root < nodes.size(); ++root) {
      if (colour[root]) continue;
      std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(root), 0}};
      colour[root] = 1;
      while (!stack.empty()) {
        auto& [v, k] = stack.back();
        if (k < nodes[v].succ.size()) {
          int w = nodes[v].succ[k++];
          if (colour[w] == 1) throw CycleDetected("rule-driven dynamics can cycle");
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
  }
  RuleReach out;
  out.states_visited = nodes.size();
  for (const auto& [profile, id] : equilibria) {
    out.equilibria.push_back(profile);
    Trace t;
    t.initial = p0;
    t.terminal = profile;
    t.terminal_is_nash = true;
    for (int v = id; nodes[v].parent >= 0; v = nodes[v].parent) t.moves.push_back(nodes[v].via);
    std::reverse(t.moves.begin(), t.moves.end());
    for (std::size_t k = 0; k < t.moves.size(); ++k) t.moves[k].step = static_cast<int>(k);
    out.witnesses.push_back(std::move(t));
  }
  return out;
}

namespace {

int preference(const std::vector<StateVector>& profile, const std::vector<int>& chosen, const StateVector& v,
               const StateVector& w) {
  bool v_chosen = false, w_chosen = false;
  for (int k : chosen) {
    if (profile[k] == v) v_chosen = true;
    if (profile[k] == w) w_chosen = true;
  }
  if (v_chosen && !w_chosen) return 1;
  if (w_chosen && !v_chosen) return -1;
  return 0;
}

}  // namespace

std::vector<IipViolation> check_iip(const VectorChooser& chooser, const std::vector<std::vector<StateVector>>& profiles) {
  std::vector<std::vector<int>> chosen;
  chosen.reserve(profiles.size());
  for (const auto& prof : profiles) chosen.push_back(chooser(prof));
  std::vector<IipViolation> out;
  for (std::size_t a = 0; a < profiles.size(); ++a) {
    for (std::size_t b = a + 1; b < profiles.size(); ++b) {
      std::vector<const StateVector*> shared;
      for (const auto& v : profiles[a]) {
        bool in_b = std::find(profiles[b].begin(), profiles[b].end(), v) != profiles[b].end();
        bool dup = std::any_of(shared.begin(), shared.end(), [&](const StateVector* s) { return *s == v; });
        if (in_b && !dup) shared.push_back(&v);
      }
      for (std::size_t x = 0; x < shared.size(); ++x) {
        for (std::size_t y = x + 1; y < shared.size(); ++y) {
          int pa = preference(profiles[a], chosen[a], *shared[x], *shared[y]);
          int pb = preference(profiles[b], chosen[b], *shared[x], *shared[y]);
          if (pa * pb < 0) {
            out.push_back(IipViolation{a, b, pa > 0 ? *shared[x] : *shared[y], pb > 0 ? *shared[x] : *shared[y]});
          }
        }
      }
    }
  }
  return out;
}

std::vector<IipViolation> check_iip(const LocalRule& rule, const std::vector<std::vector<StateVector>>& profiles) {
  return check_iip([&rule](const std::vector<StateVector>& vs) { return rule.choose_vectors(vs); }, profiles);
}

}  // namespace brd
