#pragma once

#include "brd/dynamics.hpp"
#include "brd/fixtures.hpp"
#include "brd/network.hpp"
#include "brd/oracle.hpp"
#include "brd/spp_dp.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace brd {

using Json = nlohmann::ordered_json;

// One game with its initial profile, as stored in an instance file.
// model is one of "nfg", "weighted-nfg", "sched", "coco".
struct Instance {
  std::string model;
  std::optional<NetworkGame> network;  // network models only
  Game game;
  Profile initial;
};

// Parses an instance document. Unknown fields, malformed rationals, unknown
// nodes or edges and non-path strategies throw InvalidInput.
Instance instance_from_json(const Json& doc);
Json instance_to_json(const Instance& instance);
Instance instance_from_fixture(const Fixture& fixture);

// Strategy encodings: edge-id arrays for networks, 1-based machine numbers
// for scheduling.
Json strategy_to_json(const Instance& instance, int player, int strategy);
int strategy_from_json(const Instance& instance, int player, const Json& value);
Json profile_to_json(const Instance& instance, const Profile& profile);
Profile profile_from_json(const Instance& instance, const Json& value);

Json trace_to_json(const Instance& instance, const Trace& trace);
Trace trace_from_json(const Instance& instance, const Json& doc);

Json oracle_report_to_json(const Instance& instance, const ReachabilityGraph& graph);
Json inefficiency_report_to_json(const Instance& instance, const InefficiencyReport& report);
Json dp_report_to_json(const Instance& instance, const std::string& mode, const DpResult& result);

Json read_json_file(const std::string& path);    // throws InvalidInput
void write_json_file(const std::string& path, const Json& doc);  // "-" writes stdout
std::string dump_json(const Json& doc);

}  // namespace brd
