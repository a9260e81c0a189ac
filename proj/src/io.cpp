#include "brd/io.hpp"

#include "brd/errors.hpp"
#include "brd/scheduling.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace brd {

namespace {

void require_keys(const Json& obj, const std::string& what, const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
  if (!obj.is_object()) throw InvalidInput(what + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw InvalidInput("unknown field \"" + key + "\" in " + what);
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) throw InvalidInput("missing field \"" + key + "\" in " + what);
  }
}

std::string get_string(const Json& obj, const std::string& key, const std::string& what) {
  const Json& v = obj.at(key);
  if (!v.is_string()) throw InvalidInput("field \"" + key + "\" in " + what + " must be a string");
  return v.get<std::string>();
}

int get_int(const Json& v, const std::string& what) {
  if (!v.is_number_integer()) throw InvalidInput(what + " must be an integer");
  return v.get<int>();
}

Rational get_rational(const Json& obj, const std::string& key, const std::string& what) {
  return parse_rational(get_string(obj, key, what));
}

bool is_network_model(const std::string& model) { return model == "nfg" || model == "weighted-nfg"; }

std::string player_key(int player) { return std::to_string(player + 1); }

Network network_from_json(const Json& graph) {
  require_keys(graph, "graph", {"nodes", "edges"}, {"nodes", "edges"});
  Network net;
  if (!graph.at("nodes").is_array()) throw InvalidInput("graph.nodes must be an array");
  std::set<std::string> names;
  for (const Json& n : graph.at("nodes")) {
    if (!n.is_string()) throw InvalidInput("node names must be strings");
    std::string name = n.get<std::string>();
    if (name.empty() || !names.insert(name).second) throw InvalidInput("node names must be unique and non-empty");
    net.node_names.push_back(name);
  }
  if (!graph.at("edges").is_array()) throw InvalidInput("graph.edges must be an array");
  std::set<int> ids;
  for (const Json& e : graph.at("edges")) {
    require_keys(e, "edge", {"id", "tail", "head", "cost"}, {"id", "tail", "head", "cost"});
    Edge edge;
    edge.id = get_int(e.at("id"), "edge id");
    if (!ids.insert(edge.id).second) throw InvalidInput("duplicate edge id " + std::to_string(edge.id));
    edge.tail = net.node_index(get_string(e, "tail", "edge"));
    edge.head = net.node_index(get_string(e, "head", "edge"));
    edge.cost = get_rational(e, "cost", "edge");
    net.edges.push_back(edge);
  }
  return net;
}

Json network_to_json(const Network& net) {
  std::set<std::string> names(net.node_names.begin(), net.node_names.end());
  if (names.size() != net.node_names.size() || names.count("")) {
    throw InvalidInput("network node names are not unique");
  }
  Json graph = Json::object();
  graph["nodes"] = net.node_names;
  Json edges = Json::array();
  for (const Edge& e : net.edges) {
    Json je = Json::object();
    je["id"] = e.id;
    je["tail"] = net.node_names[e.tail];
    je["head"] = net.node_names[e.head];
    je["cost"] = to_string(e.cost);
    edges.push_back(je);
  }
  graph["edges"] = edges;
  return graph;
}

Json move_to_json(const Instance& instance, const Move& mv) {
  Json j = Json::object();
  j["step"] = mv.step;
  j["player"] = mv.player + 1;
  j["from"] = strategy_to_json(instance, mv.player, mv.from);
  j["to"] = strategy_to_json(instance, mv.player, mv.to);
  j["cost_before"] = to_string(mv.cost_before);
  j["cost_after"] = to_string(mv.cost_after);
  j["profile_hash"] = mv.profile_hash;
  return j;
}

Json profiles_to_json(const Instance& instance, const std::vector<Profile>& profiles) {
  Json out = Json::array();
  for (const auto& p : profiles) {
    Json e = Json::object();
    e["profile"] = profile_to_json(instance, p);
    e["social_cost"] = to_string(social_cost(instance.game, p));
    out.push_back(e);
  }
  return out;
}

}  // namespace

Instance instance_from_json(const Json& doc) {
  require_keys(doc, "instance", {"model", "graph", "machines", "B", "players", "initial"},
               {"model", "players", "initial"});
  Instance inst;
  inst.model = get_string(doc, "model", "instance");
  const Json& players = doc.at("players");
  if (!players.is_array() || players.empty()) throw InvalidInput("players must be a non-empty array");
  if (is_network_model(inst.model)) {
    require_keys(doc, "network instance", {"model", "graph", "players", "initial"}, {"graph"});
    Network net = network_from_json(doc.at("graph"));
    const bool weighted = inst.model == "weighted-nfg";
    std::vector<PlayerSpec> specs;
    for (const Json& p : players) {
      if (weighted) {
        require_keys(p, "player", {"source", "target", "weight"}, {"source", "target", "weight"});
      } else {
        require_keys(p, "player", {"source", "target"}, {"source", "target"});
      }
      PlayerSpec spec;
      spec.source = net.node_index(get_string(p, "source", "player"));
      spec.target = net.node_index(get_string(p, "target", "player"));
      if (weighted) spec.weight = get_rational(p, "weight", "player");
      specs.push_back(spec);
    }
    inst.network = make_network_game(std::move(net), std::move(specs), weighted);
    inst.game = inst.network->game;
  } else if (inst.model == "sched" || inst.model == "coco") {
    const bool coco = inst.model == "coco";
    if (coco) {
      require_keys(doc, "coco instance", {"model", "machines", "B", "players", "initial"}, {"machines", "B"});
    } else {
      require_keys(doc, "sched instance", {"model", "machines", "players", "initial"}, {"machines"});
    }
    int machines = get_int(doc.at("machines"), "machines");
    std::vector<Rational> lengths;
    for (const Json& p : players) {
      if (coco) {
        require_keys(p, "job", {}, {});
      } else {
        require_keys(p, "job", {"length"}, {"length"});
        lengths.push_back(get_rational(p, "length", "job"));
      }
    }
    inst.game = coco ? make_coco_game(machines, static_cast<int>(players.size()), get_rational(doc, "B", "instance"))
                     : make_linear_sched_game(machines, lengths);
  } else {
    throw InvalidInput("unknown model \"" + inst.model + "\"");
  }
  inst.initial = profile_from_json(inst, doc.at("initial"));
  return inst;
}

Json instance_to_json(const Instance& inst) {
  Json doc = Json::object();
  doc["model"] = inst.model;
  Json players = Json::array();
  if (inst.network) {
    const Network& net = inst.network->network;
    doc["graph"] = network_to_json(net);
    for (const auto& spec : inst.network->players) {
      Json p = Json::object();
      p["source"] = net.node_names[spec.source];
      p["target"] = net.node_names[spec.target];
      if (inst.network->weighted) p["weight"] = to_string(spec.weight);
      players.push_back(p);
    }
  } else {
    doc["machines"] = inst.game.num_resources();
    if (inst.model == "coco") doc["B"] = to_string(inst.game.activation_cost);
    for (int i = 0; i < inst.game.num_players(); ++i) {
      Json p = Json::object();
      if (inst.model != "coco") p["length"] = to_string(inst.game.weight[i]);
      players.push_back(p);
    }
  }
  doc["players"] = players;
  doc["initial"] = profile_to_json(inst, inst.initial);
  return doc;
}

Instance instance_from_fixture(const Fixture& fixture) {
  Instance inst;
  inst.network = fixture.network;
  inst.game = fixture.game;
  inst.initial = fixture.initial;
  if (fixture.network) {
    inst.model = fixture.network->weighted ? "weighted-nfg" : "nfg";
  } else {
    inst.model = fixture.game.model == CostModel::Conflicting ? "coco" : "sched";
  }
  return inst;
}

Json strategy_to_json(const Instance& inst, int player, int strategy) {
  if (inst.network) return edge_ids_of(*inst.network, player, strategy);
  return inst.game.strategies[player][strategy].front() + 1;
}

int strategy_from_json(const Instance& inst, int player, const Json& value) {
  if (inst.network) {
    if (!value.is_array()) throw InvalidInput("a network strategy is an array of edge ids");
    std::vector<int> ids;
    for (const Json& id : value) ids.push_back(get_int(id, "edge id"));
    return strategy_from_edge_ids(*inst.network, player, ids);
  }
  int machine = get_int(value, "machine") - 1;
  const auto& strategies = inst.game.strategies[player];
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    if (strategies[s].front() == machine) return static_cast<int>(s);
  }
  throw InvalidInput("machine " + std::to_string(machine + 1) + " out of range");
}

Json profile_to_json(const Instance& inst, const Profile& profile) {
  Json out = Json::object();
  for (int i = 0; i < static_cast<int>(profile.size()); ++i) out[player_key(i)] = strategy_to_json(inst, i, profile[i]);
  return out;
}

Profile profile_from_json(const Instance& inst, const Json& value) {
  const int n = inst.game.num_players();
  std::set<std::string> keys;
  for (int i = 0; i < n; ++i) keys.insert(player_key(i));
  require_keys(value, "profile", keys, keys);
  Profile p(n);
  for (int i = 0; i < n; ++i) p[i] = strategy_from_json(inst, i, value.at(player_key(i)));
  validate_profile(inst.game, p);
  return p;
}

Json trace_to_json(const Instance& inst, const Trace& trace) {
  Json doc = Json::object();
  doc["initial"] = profile_to_json(inst, trace.initial);
  Json moves = Json::array();
  for (const Move& mv : trace.moves) moves.push_back(move_to_json(inst, mv));
  doc["moves"] = moves;
  doc["terminal"] = profile_to_json(inst, trace.terminal);
  doc["terminal_is_nash"] = trace.terminal_is_nash;
  doc["social_cost"] = to_string(social_cost(inst.game, trace.terminal));
  return doc;
}

Trace trace_from_json(const Instance& inst, const Json& doc) {
  require_keys(doc, "trace", {"initial", "moves", "terminal", "terminal_is_nash", "social_cost"},
               {"initial", "moves", "terminal", "terminal_is_nash"});
  Trace t;
  t.initial = profile_from_json(inst, doc.at("initial"));
  if (!doc.at("moves").is_array()) throw InvalidInput("moves must be an array");
  for (const Json& m : doc.at("moves")) {
    require_keys(m, "move", {"step", "player", "from", "to", "cost_before", "cost_after", "profile_hash"},
                 {"step", "player", "from", "to", "cost_before", "cost_after", "profile_hash"});
    Move mv;
    mv.step = get_int(m.at("step"), "step");
    mv.player = get_int(m.at("player"), "player") - 1;
    if (mv.player < 0 || mv.player >= inst.game.num_players()) throw InvalidInput("move player out of range");
    mv.from = strategy_from_json(inst, mv.player, m.at("from"));
    mv.to = strategy_from_json(inst, mv.player, m.at("to"));
    mv.cost_before = get_rational(m, "cost_before", "move");
    mv.cost_after = get_rational(m, "cost_after", "move");
    mv.profile_hash = get_string(m, "profile_hash", "move");
    t.moves.push_back(mv);
  }
  t.terminal = profile_from_json(inst, doc.at("terminal"));
  if (!doc.at("terminal_is_nash").is_boolean()) throw InvalidInput("terminal_is_nash must be a boolean");
  t.terminal_is_nash = doc.at("terminal_is_nash").get<bool>();
  return t;
}

Json oracle_report_to_json(const Instance& inst, const ReachabilityGraph& graph) {
  Json doc = Json::object();
  doc["initial"] = profile_to_json(inst, graph.initial());
  doc["states_visited"] = graph.states_visited();
  doc["equilibria"] = profiles_to_json(inst, graph.equilibria());
  const auto& costs = graph.equilibrium_costs();
  std::size_t best = 0;
  for (std::size_t k = 1; k < costs.size(); ++k) {
    if (costs[k] < costs[best]) best = k;
  }
  Json b = Json::object();
  b["profile"] = profile_to_json(inst, graph.equilibria()[best]);
  b["social_cost"] = to_string(costs[best]);
  b["witness"] = trace_to_json(inst, graph.witness(graph.equilibria()[best]));
  doc["best"] = b;
  return doc;
}

Json inefficiency_report_to_json(const Instance& inst, const InefficiencyReport& rep) {
  Json doc = Json::object();
  doc["game_id"] = rep.game_id;
  doc["rule"] = rep.rule;
  doc["initial"] = profile_to_json(inst, rep.initial);
  doc["alpha"] = to_string(rep.alpha);
  doc["worst_rule_cost"] = to_string(rep.worst_rule_cost);
  doc["best_cost"] = to_string(rep.best_cost);
  doc["max_equilibrium_cost"] = rep.max_equilibrium_cost ? Json(to_string(*rep.max_equilibrium_cost)) : Json();
  doc["min_equilibrium_cost"] = rep.min_equilibrium_cost ? Json(to_string(*rep.min_equilibrium_cost)) : Json();
  doc["oracle_states"] = rep.oracle_states;
  doc["rule_states"] = rep.rule_states;
  doc["rule_equilibria"] = profiles_to_json(inst, rep.rule_equilibria);
  doc["worst_witness"] = trace_to_json(inst, rep.worst_witness);
  doc["best_witness"] = trace_to_json(inst, rep.best_witness);
  return doc;
}

Json dp_report_to_json(const Instance& inst, const std::string& mode, const DpResult& result) {
  Json doc = Json::object();
  doc["mode"] = mode;
  doc["opt"] = to_string(result.opt);
  Json skeleton = Json::array();
  for (int i : result.skeleton) skeleton.push_back(i + 1);
  doc["skeleton"] = skeleton;
  doc["trace"] = trace_to_json(inst, result.trace);
  return doc;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

void write_json_file(const std::string& path, const Json& doc) {
  if (path == "-") {
    std::cout << dump_json(doc);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << dump_json(doc);
}

}  // namespace brd
