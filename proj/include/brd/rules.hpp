#pragma once

#include "brd/dynamics.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace brd {

// Prefers the highest current cost.
class MaxCostRule final : public LocalRule {
 public:
  std::string name() const override { return "max-cost"; }
  bool accepts(const Game&) const override { return true; }
  int compare(const StateVector& a, const StateVector& b) const override;
  std::unique_ptr<DeviatorRule> clone() const override { return std::make_unique<MaxCostRule>(*this); }
};

// Prefers the cheapest best-response path (sum of edge costs).
class MinPathRule final : public LocalRule {
 public:
  std::string name() const override { return "min-path"; }
  bool accepts(const Game& game) const override { return !game.is_scheduling(); }
  int compare(const StateVector& a, const StateVector& b) const override;
  std::unique_ptr<DeviatorRule> clone() const override { return std::make_unique<MinPathRule>(*this); }
};

// Prefers the largest cost decrease.
class MaxImprovementRule final : public LocalRule {
 public:
  std::string name() const override { return "max-improvement"; }
  bool accepts(const Game&) const override { return true; }
  int compare(const StateVector& a, const StateVector& b) const override;
  std::unique_ptr<DeviatorRule> clone() const override { return std::make_unique<MaxImprovementRule>(*this); }
};

// Prefers the longest job.
class LongestJobRule final : public LocalRule {
 public:
  std::string name() const override { return "longest-job"; }
  bool accepts(const Game& game) const override { return game.is_scheduling(); }
  int compare(const StateVector& a, const StateVector& b) const override;
  std::unique_ptr<DeviatorRule> clone() const override { return std::make_unique<LongestJobRule>(*this); }
};

// Scans player ids cyclically, starting after the last mover.
class RoundRobinRule final : public DeviatorRule {
 public:
  std::string name() const override { return "round-robin"; }
  bool is_local() const override { return false; }
  bool accepts(const Game&) const override { return true; }
  std::vector<int> choose(const RuleInput& input) const override;
  void on_move(int player) override { last_ = player; }
  std::string state_key() const override { return std::to_string(last_); }
  std::unique_ptr<DeviatorRule> clone() const override { return std::make_unique<RoundRobinRule>(*this); }

 private:
  int last_ = -1;
};

// Picks one suboptimal player from a seeded stream.
class RandomRule final : public DeviatorRule {
 public:
  explicit RandomRule(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "random"; }
  bool is_local() const override { return false; }
  bool accepts(const Game&) const override { return true; }
  std::vector<int> choose(const RuleInput& input) const override;
  void on_move(int) override { ++draws_; }
  std::string state_key() const override { return std::to_string(draws_); }
  std::unique_ptr<DeviatorRule> clone() const override { return std::make_unique<RandomRule>(*this); }

 private:
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
};

// Conflicting-congestion rule: the most loaded machine when it is high and
// suboptimal, otherwise the least loaded machine when suboptimal. The lowest-id
// job on the selected machine moves. B is read from the game, or fixed at
// construction for use on bare vector profiles.
class SOptRule final : public LocalRule {
 public:
  SOptRule() = default;
  explicit SOptRule(Rational B) : B_(std::move(B)) {}
  std::string name() const override { return "s-opt"; }
  bool accepts(const Game& game) const override { return game.model == CostModel::Conflicting; }
  int compare(const StateVector& a, const StateVector& b) const override;
  bool eligible(const StateVector& v) const override;
  std::vector<int> choose(const RuleInput& input) const override;
  std::unique_ptr<DeviatorRule> clone() const override { return std::make_unique<SOptRule>(*this); }

 private:
  int rank(const SchedStateVector& v) const;
  std::optional<Rational> B_;
};

// Builds a rule from its command-line identifier. Throws InvalidInput.
std::unique_ptr<DeviatorRule> make_rule(const std::string& name, std::uint64_t seed = 0);

const std::vector<std::string>& rule_names();

}  // namespace brd
