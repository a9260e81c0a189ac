#pragma once

#include "brd/game.hpp"
#include "brd/state_vector.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace brd {

struct RuleInput {
  const Game& game;
  const Profile& profile;
  const std::vector<int>& suboptimal;       // ascending player ids
  const std::vector<StateVector>& vectors;  // aligned with suboptimal
};

class DeviatorRule {
 public:
  virtual ~DeviatorRule() = default;
  virtual std::string name() const = 0;
  virtual bool is_local() const = 0;
  virtual bool accepts(const Game& game) const = 0;
  // Non-empty subset of input.suboptimal, or empty to report an equilibrium.
  virtual std::vector<int> choose(const RuleInput& input) const = 0;
  // Called with the player that actually moved.
  virtual void on_move(int /*player*/) {}
  // Encodes internal state (cursor, random stream position); empty when stateless.
  virtual std::string state_key() const { return {}; }
  virtual std::unique_ptr<DeviatorRule> clone() const = 0;
};

// A rule given by a total preorder over state vectors: the choice set is the
// owners of the maximal eligible vectors.
class LocalRule : public DeviatorRule {
 public:
  bool is_local() const override { return true; }
  // Positive when a is preferred to b, zero when equivalent.
  virtual int compare(const StateVector& a, const StateVector& b) const = 0;
  virtual bool eligible(const StateVector& /*v*/) const { return true; }
  // Indices into vectors of the maximal eligible entries.
  std::vector<int> choose_vectors(const std::vector<StateVector>& vectors) const;
  std::vector<int> choose(const RuleInput& input) const override;
};

enum class RuleTie { LowestId, BranchAll };
enum class BrTie { Preferred, BranchAll };

struct TiePolicy {
  RuleTie rule = RuleTie::LowestId;
  BrTie br = BrTie::Preferred;
  bool deterministic() const { return rule == RuleTie::LowestId && br == BrTie::Preferred; }
};

struct Move {
  int step = 0;
  int player = 0;
  int from = 0;
  int to = 0;
  Cost cost_before;
  Cost cost_after;
  std::string profile_hash;  // of the profile after the move
};

struct Trace {
  Profile initial;
  std::vector<Move> moves;
  Profile terminal;
  bool terminal_is_nash = false;
};

inline constexpr std::size_t kDefaultMaxSteps = 1000000;

Profile apply_move(const Profile& profile, int player, int to);

// Runs best-response dynamics under a deterministic policy until equilibrium.
// Throws BudgetExceeded, CycleDetected or RuleViolation.
Trace run_brd(const Game& game, const Profile& p0, const DeviatorRule& rule, TiePolicy policy = {},
              std::size_t max_steps = kDefaultMaxSteps);

// Moves with a forced deviator and strategy at every step, e.g. a script or a
// witness sequence. Each move is checked to be a strict best-response move.
Trace replay_moves(const Game& game, const Profile& p0, const std::vector<std::pair<int, int>>& moves);

// Finishes a trace by letting the lowest-id suboptimal player take her
// preferred best response until equilibrium.
void complete_to_nash(const Game& game, Trace& trace, std::size_t max_steps = kDefaultMaxSteps);

// Re-verifies every move and the terminal flag. Returns an empty string on
// success, otherwise a description of the first problem.
std::string verify_trace(const Game& game, const Trace& trace);

struct RuleReach {
  std::vector<Profile> equilibria;  // ascending by profile encoding
  std::vector<Trace> witnesses;     // one per equilibrium, same order
  std::size_t states_visited = 0;
};

inline constexpr std::size_t kDefaultStateLimit = 5000000;

// Equilibria reachable under the rule, branching on best-response ties (and on
// rule ties when requested).
RuleReach reachable_by_rule(const Game& game, const Profile& p0, const DeviatorRule& rule,
                            TiePolicy policy = {RuleTie::LowestId, BrTie::BranchAll},
                            std::size_t state_limit = kDefaultStateLimit);

using VectorChooser = std::function<std::vector<int>(const std::vector<StateVector>&)>;

struct IipViolation {
  std::size_t first = 0;  // indices of the two vector profiles
  std::size_t second = 0;
  StateVector preferred_in_first;
  StateVector preferred_in_second;
};

// Reports every pair of vector profiles in which the chooser's strict
// preference between two shared state vectors flips.
std::vector<IipViolation> check_iip(const VectorChooser& chooser,
                                    const std::vector<std::vector<StateVector>>& profiles);
std::vector<IipViolation> check_iip(const LocalRule& rule, const std::vector<std::vector<StateVector>>& profiles);

}  // namespace brd
