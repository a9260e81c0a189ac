#include "brd/rules.hpp"

#include "brd/errors.hpp"
#include "brd/scheduling.hpp"

#include <algorithm>

namespace brd {

namespace {

int sign(const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

const NfgStateVector& as_nfg(const StateVector& v) {
  if (auto* p = std::get_if<NfgStateVector>(&v)) return *p;
  throw UnsupportedModel("rule needs network state vectors");
}

const SchedStateVector& as_sched(const StateVector& v) {
  if (auto* p = std::get_if<SchedStateVector>(&v)) return *p;
  throw UnsupportedModel("rule needs scheduling state vectors");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

int MaxCostRule::compare(const StateVector& a, const StateVector& b) const {
  return sign(current_cost_of(a) - current_cost_of(b));
}

int MinPathRule::compare(const StateVector& a, const StateVector& b) const {
  return sign(as_nfg(b).br_path_cost - as_nfg(a).br_path_cost);
}

int MaxImprovementRule::compare(const StateVector& a, const StateVector& b) const {
  return sign((current_cost_of(a) - br_cost_of(a)) - (current_cost_of(b) - br_cost_of(b)));
}

int LongestJobRule::compare(const StateVector& a, const StateVector& b) const {
  return sign(as_sched(a).length - as_sched(b).length);
}

std::vector<int> RoundRobinRule::choose(const RuleInput& input) const {
  if (input.suboptimal.empty()) return {};
  auto it = std::upper_bound(input.suboptimal.begin(), input.suboptimal.end(), last_);
  return {it == input.suboptimal.end() ? input.suboptimal.front() : *it};
}

std::vector<int> RandomRule::choose(const RuleInput& input) const {
  if (input.suboptimal.empty()) return {};
  std::uint64_t r = splitmix64(seed_ ^ splitmix64(draws_));
  return {input.suboptimal[r % input.suboptimal.size()]};
}

int SOptRule::rank(const SchedStateVector& v) const {
  if (!B_) throw InvalidInput("s-opt needs the activation cost");
  Rational highest = 0, lowest = 0;
  int hi_machine = -1, lo_machine = -1;
  for (int j = 0; j < static_cast<int>(v.loads.size()); ++j) {
    const Rational& l = v.loads[j];
    if (l == 0) continue;
    if (hi_machine == -1 || l >= highest) {
      highest = l;
      hi_machine = j;
    }
    if (lo_machine == -1 || l < lowest) {
      lowest = l;
      lo_machine = j;
    }
  }
  if (v.machine == hi_machine && highest >= l_star(*B_)) return 2;
  if (v.machine == lo_machine) return 1;
  return 0;
}

int SOptRule::compare(const StateVector& a, const StateVector& b) const {
  return rank(as_sched(a)) - rank(as_sched(b));
}

bool SOptRule::eligible(const StateVector& v) const { return rank(as_sched(v)) > 0; }

std::vector<int> SOptRule::choose(const RuleInput& input) const {
  SOptRule bound = B_ ? *this : SOptRule(input.game.activation_cost);
  std::vector<int> best = bound.choose_vectors(input.vectors);
  if (best.empty()) return {};
  std::vector<int> out;
  for (int k : best) out.push_back(input.suboptimal[k]);
  return {*std::min_element(out.begin(), out.end())};
}

std::unique_ptr<DeviatorRule> make_rule(const std::string& name, std::uint64_t seed) {
  if (name == "max-cost") return std::make_unique<MaxCostRule>();
  if (name == "min-path") return std::make_unique<MinPathRule>();
  if (name == "max-improvement") return std::make_unique<MaxImprovementRule>();
  if (name == "longest-job") return std::make_unique<LongestJobRule>();
  if (name == "round-robin") return std::make_unique<RoundRobinRule>();
  if (name == "random") return std::make_unique<RandomRule>(seed);
  if (name == "s-opt") return std::make_unique<SOptRule>();
  throw InvalidInput("unknown rule \"" + name + "\"");
}

const std::vector<std::string>& rule_names() {
  static const std::vector<std::string> names{"max-cost",    "min-path",    "max-improvement", "longest-job",
                                              "round-robin", "random",      "s-opt"};
  return names;
}

}  // namespace brd
