#include "brd/dynamics.hpp"
#include "brd/errors.hpp"
#include "brd/fixtures.hpp"
#include "brd/io.hpp"
#include "brd/oracle.hpp"
#include "brd/rules.hpp"
#include "brd/spp_dp.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

using namespace brd;

namespace {

struct Options {
  std::string instance_path;
  std::string trace_path;
  std::string out = "-";
  std::string rule = "max-cost";
  std::uint64_t seed = 0;
  std::size_t max_steps = kDefaultMaxSteps;
  std::size_t state_limit = kDefaultStateLimit;
  int jobs = 1;
  std::string mode;
  std::string fixture;
  std::vector<std::string> params;
};

Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

int cmd_run(const Options& o) {
  Instance inst = load_instance(o.instance_path);
  auto rule = make_rule(o.rule, o.seed);
  Trace trace = run_brd(inst.game, inst.initial, *rule, TiePolicy{}, o.max_steps);
  write_json_file(o.out, trace_to_json(inst, trace));
  return trace.terminal_is_nash ? 0 : 1;
}

int cmd_oracle(const Options& o) {
  Instance inst = load_instance(o.instance_path);
  ReachabilityGraph graph(inst.game, inst.initial, OracleOptions{o.state_limit, o.jobs});
  write_json_file(o.out, oracle_report_to_json(inst, graph));
  return 0;
}

int cmd_ineff(const Options& o) {
  Instance inst = load_instance(o.instance_path);
  auto rule = make_rule(o.rule, o.seed);
  std::string id = std::filesystem::path(o.instance_path).stem().string();
  InefficiencyReport rep = rule_inefficiency(inst.game, inst.initial, *rule, OracleOptions{o.state_limit, o.jobs}, id);
  write_json_file(o.out, inefficiency_report_to_json(inst, rep));
  return 0;
}

int cmd_dp(const Options& o) {
  Instance inst = load_instance(o.instance_path);
  if (!inst.network) throw UnsupportedModel("dp requires a network instance");
  SppInstance spp = make_spp_instance(*inst.network, inst.initial);
  DpResult result;
  if (o.mode == "single-source") {
    result = dp_single_source(spp);
  } else {
    result = dp_proper_intervals(spp);
  }
  write_json_file(o.out, dp_report_to_json(inst, o.mode, result));
  return 0;
}

int cmd_fixture(const Options& o) {
  std::map<std::string, std::string> params;
  for (const auto& kv : o.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidInput("parameter \"" + kv + "\" is not of the form key=value");
    if (!params.emplace(kv.substr(0, eq), kv.substr(eq + 1)).second) {
      throw InvalidInput("parameter " + kv.substr(0, eq) + " given twice");
    }
  }
  Fixture f = make_fixture(o.fixture, params);
  write_json_file(o.out, instance_to_json(instance_from_fixture(f)));
  return 0;
}

int cmd_check(const Options& o) {
  Instance inst = load_instance(o.instance_path);
  Trace trace = trace_from_json(inst, read_json_file(o.trace_path));
  if (trace.initial != inst.initial) throw InvalidInput("trace does not start at the instance's initial profile");
  std::string problem = verify_trace(inst.game, trace);
  if (!problem.empty()) throw InvalidInput("trace rejected: " + problem);
  std::cout << "ok: " << trace.moves.size() << " moves, terminal social cost "
            << to_string(social_cost(inst.game, trace.terminal)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-response dynamics in congestion games"};
  app.require_subcommand(1);
  Options o;

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("instance", o.instance_path, "Instance JSON file")->required()->check(CLI::ExistingFile);
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out,-o", o.out, "Output file, - for stdout"); };
  auto add_oracle_opts = [&](CLI::App* sub) {
    sub->add_option("--state-limit", o.state_limit, "Maximum number of distinct profiles explored");
    sub->add_option("--jobs,-j", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto add_rule = [&](CLI::App* sub) {
    sub->add_option("--rule,-r", o.rule, "Deviator rule")->check(CLI::IsMember(rule_names()));
    sub->add_option("--seed", o.seed, "Seed for the random rule");
  };

  CLI::App* run = app.add_subcommand("run", "Run best-response dynamics under a deviator rule");
  add_instance(run);
  add_rule(run);
  run->add_option("--max-steps", o.max_steps, "Step budget");
  add_out(run);

  CLI::App* oracle = app.add_subcommand("oracle", "Enumerate every equilibrium reachable by best responses");
  add_instance(oracle);
  add_oracle_opts(oracle);
  add_out(oracle);

  CLI::App* ineff = app.add_subcommand("ineff", "Inefficiency of a deviator rule against the oracle");
  add_instance(ineff);
  add_rule(ineff);
  add_oracle_opts(ineff);
  add_out(ineff);

  CLI::App* dp = app.add_subcommand("dp", "Optimal best-response sequence on series-of-parallel networks");
  add_instance(dp);
  dp->add_option("--mode", o.mode, "Interval structure")
      ->required()
      ->check(CLI::IsMember({"single-source", "proper"}));
  add_out(dp);

  CLI::App* fixture = app.add_subcommand("fixture", "Materialize a built-in instance");
  fixture->add_option("name", o.fixture, "Fixture name")->required()->check(CLI::IsMember(fixture_names()));
  fixture->add_option("--params,-p", o.params, "Parameters as key=value");
  add_out(fixture);

  CLI::App* check = app.add_subcommand("check", "Re-verify a trace against its instance");
  check->add_option("trace", o.trace_path, "Trace JSON file")->required()->check(CLI::ExistingFile);
  add_instance(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(o);
    if (*oracle) return cmd_oracle(o);
    if (*ineff) return cmd_ineff(o);
    if (*dp) return cmd_dp(o);
    if (*fixture) return cmd_fixture(o);
    if (*check) return cmd_check(o);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
