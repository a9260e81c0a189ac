#include "brd/errors.hpp"
#include "brd/fixtures.hpp"
#include "brd/io.hpp"
#include "brd/rules.hpp"

#include "../generators.hpp"
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace brd;
using namespace brd::testing;
namespace fs = std::filesystem;

namespace {

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / ("brd-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Workdir() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Result {
  int code;
  std::string out;
};

Result brd_cli(const std::string& args, const Workdir& w) {
  std::string out = w.path("stdout.txt");
  std::string cmd = std::string(BRD_CLI_PATH) + " " + args + " > " + out + " 2> " + w.path("stderr.txt");
  int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Fixture> all_fixtures() {
  std::vector<Fixture> out;
  for (const auto& name : fixture_names()) {
    out.push_back(make_fixture(name, {}));
    if (name == "fig5" || name == "fig7" || name == "fig9") out.push_back(make_fixture(name, {{"scenario", "b"}}));
  }
  return out;
}

Json fig_doc() { return instance_to_json(instance_from_fixture(fig2_maxcost(3, Rational(1, 10)))); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("instance documents round trip") {
    for (const Fixture& f : all_fixtures()) {
      CAPTURE(f.name);
      Instance inst = instance_from_fixture(f);
      Json doc = instance_to_json(inst);
      Instance back = instance_from_json(Json::parse(dump_json(doc)));
      CHECK(instance_to_json(back) == doc);
      CHECK(back.model == inst.model);
      CHECK(back.game.strategies == inst.game.strategies);
      CHECK(back.game.weight == inst.game.weight);
      CHECK(back.game.resource_cost == inst.game.resource_cost);
      CHECK(back.game.activation_cost == inst.game.activation_cost);
      CHECK(back.initial == inst.initial);
    }
  }

  TEST_CASE("malformed instances are rejected") {
    Json extra = fig_doc();
    extra["colour"] = "red";
    CHECK_THROWS_AS(instance_from_json(extra), InvalidInput);
    Json bad_cost = fig_doc();
    bad_cost["graph"]["edges"][0]["cost"] = "1/0";
    CHECK_THROWS_AS(instance_from_json(bad_cost), InvalidInput);
    Json numeric_cost = fig_doc();
    numeric_cost["graph"]["edges"][0]["cost"] = 1.5;
    CHECK_THROWS_AS(instance_from_json(numeric_cost), InvalidInput);
    Json bad_node = fig_doc();
    bad_node["players"][0]["source"] = "nowhere";
    CHECK_THROWS_AS(instance_from_json(bad_node), InvalidInput);
    Json not_path = fig_doc();
    not_path["initial"]["1"] = Json::array({1, 2});
    CHECK_THROWS_AS(instance_from_json(not_path), InvalidInput);
    Json missing = fig_doc();
    missing["initial"].erase("2");
    CHECK_THROWS_AS(instance_from_json(missing), InvalidInput);
    Json model = fig_doc();
    model["model"] = "auction";
    CHECK_THROWS_AS(instance_from_json(model), InvalidInput);
    Json coco = instance_to_json(instance_from_fixture(appB_coco(8)));
    coco["players"][0]["length"] = "2";
    CHECK_THROWS_AS(instance_from_json(coco), InvalidInput);
  }

  TEST_CASE("traces round trip") {
    for (const Fixture& f : all_fixtures()) {
      Instance inst = instance_from_fixture(f);
      for (const auto& name : rule_names()) {
        auto rule = make_rule(name, 1);
        if (!rule->accepts(f.game) || f.name == "fig8") continue;
        Trace t = run_brd(f.game, f.initial, *rule);
        Json doc = trace_to_json(inst, t);
        Trace back = trace_from_json(inst, Json::parse(dump_json(doc)));
        CHECK(trace_to_json(inst, back) == doc);
        CHECK(verify_trace(f.game, back).empty());
      }
    }
  }

  TEST_CASE("commands") {
    Workdir w;
    const std::string fig4 = w.path("fig4.json");
    REQUIRE(brd_cli("fixture fig4 --params m=3 --out " + fig4, w).code == 0);
    REQUIRE(brd_cli("ineff " + fig4 + " --rule min-path --out " + w.path("rep.json"), w).code == 0);
    Json rep = read_json_file(w.path("rep.json"));
    CHECK(rep["alpha"] == "4/1");
    CHECK(rep["best_cost"] == "14/1");
    CHECK(rep["game_id"] == "fig4");

    REQUIRE(brd_cli("run " + fig4 + " --rule min-path --out " + w.path("trace.json"), w).code == 0);
    Result ok = brd_cli("check " + w.path("trace.json") + " " + fig4, w);
    CHECK(ok.code == 0);
    CHECK(ok.out == "ok: " + std::to_string(read_json_file(w.path("trace.json"))["moves"].size()) +
                        " moves, terminal social cost 56/1\n");

    Json terminal = read_json_file(fig4);
    terminal["initial"] = read_json_file(w.path("trace.json"))["terminal"];
    write_json_file(w.path("ne.json"), terminal);
    REQUIRE(brd_cli("run " + w.path("ne.json") + " --out " + w.path("empty.json"), w).code == 0);
    CHECK(read_json_file(w.path("empty.json"))["moves"].empty());

    Json tampered = read_json_file(w.path("trace.json"));
    tampered["moves"][0]["cost_after"] = "0/1";
    write_json_file(w.path("bad.json"), tampered);
    CHECK(brd_cli("check " + w.path("bad.json") + " " + fig4, w).code == 2);
  }

  TEST_CASE("dp and oracle agree and dp traces pass the checker") {
    Workdir w;
    Rng rng(901);
    for (int k = 0; k < 12; ++k) {
      bool single = k % 2 == 0;
      SppInstance spp = single ? random_spp_instance(rng, 4, 3, 3, single_source_intervals)
                               : random_spp_instance(rng, 4, 3, 3, proper_intervals);
      Instance inst{"nfg", spp.game, spp.game.game, spp.initial};
      const std::string file = w.path("spp.json");
      write_json_file(file, instance_to_json(inst));
      std::string mode = single ? "single-source" : "proper";
      REQUIRE(brd_cli("dp " + file + " --mode " + mode + " --out " + w.path("dp.json"), w).code == 0);
      REQUIRE(brd_cli("oracle " + file + " --out " + w.path("oracle.json"), w).code == 0);
      Json dp = read_json_file(w.path("dp.json"));
      CHECK(dp["opt"] == read_json_file(w.path("oracle.json"))["best"]["social_cost"]);
      write_json_file(w.path("dp_trace.json"), dp["trace"]);
      CHECK(brd_cli("check " + w.path("dp_trace.json") + " " + file, w).code == 0);
    }
  }

  TEST_CASE("exit codes") {
    Workdir w;
    const std::string fig4 = w.path("fig4.json");
    REQUIRE(brd_cli("fixture fig4 --out " + fig4, w).code == 0);
    CHECK(brd_cli("dp " + fig4 + " --mode single-source", w).code == 2);
    CHECK(brd_cli("run " + fig4 + " --rule fastest", w).code == 2);
    CHECK(brd_cli("run " + w.path("missing.json"), w).code == 2);
    CHECK(brd_cli("fixture fig4 --params m=x", w).code == 2);
    CHECK(brd_cli("", w).code == 2);
    CHECK(brd_cli("--help", w).code == 0);
    std::ofstream(w.path("garbage.json")) << "{not json";
    CHECK(brd_cli("oracle " + w.path("garbage.json"), w).code == 2);
    const std::string appb = w.path("appb.json");
    REQUIRE(brd_cli("fixture appB --params B=27 --out " + appb, w).code == 0);
    CHECK(brd_cli("oracle " + appb + " --state-limit 5", w).code == 3);
    CHECK(brd_cli("run " + appb + " --rule max-cost --max-steps 1", w).code == 3);
    CHECK(brd_cli("run " + appb + " --rule min-path", w).code == 2);
  }

  TEST_CASE("output bytes are deterministic") {
    Workdir w;
    const std::string appb = w.path("appb.json");
    REQUIRE(brd_cli("fixture appB --params B=27 --out " + appb, w).code == 0);
    REQUIRE(brd_cli("oracle " + appb + " --jobs 1 --out " + w.path("a.json"), w).code == 0);
    REQUIRE(brd_cli("oracle " + appb + " --jobs 4 --out " + w.path("b.json"), w).code == 0);
    CHECK(slurp(w.path("a.json")) == slurp(w.path("b.json")));
    REQUIRE(brd_cli("run " + appb + " --rule random --seed 5 --out " + w.path("r1.json"), w).code == 0);
    REQUIRE(brd_cli("run " + appb + " --rule random --seed 5 --out " + w.path("r2.json"), w).code == 0);
    CHECK(slurp(w.path("r1.json")) == slurp(w.path("r2.json")));
    REQUIRE(brd_cli("fixture fig5 --params scenario=b --out " + w.path("f1.json"), w).code == 0);
    REQUIRE(brd_cli("fixture fig5 --params scenario=b --out " + w.path("f2.json"), w).code == 0);
    CHECK(slurp(w.path("f1.json")) == slurp(w.path("f2.json")));
  }
}
