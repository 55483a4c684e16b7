#ifndef KNOWHOW_CHECKER_HPP
#define KNOWHOW_CHECKER_HPP

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "knowhow/formula.hpp"
#include "knowhow/system.hpp"

namespace knowhow {

/// Outcome of evaluating a formula at a history.
///
/// The empty coalition cannot distinguish any two histories, so K{} and H{}
/// quantify over histories of every length. Those clauses are evaluated over
/// histories of length at most `horizon_used` and `bounded` records that such
/// a truncated clause was consulted. Verdicts of formulas without the empty
/// coalition are exact and never bounded.
struct Verdict {
  bool value = false;
  bool bounded = false;
  std::size_t horizon_used = 0;
  /// For a false top-level K_C or H{} formula: a history in the quantified
  /// range at which the body fails.
  std::optional<History> counterexample;
};

struct Witness {
  StrategyProfile profile;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Memoizing evaluator bound to one system and one horizon. Histories and
/// subformulas are interned, so repeated queries on the same object share
/// work; distinct Evaluator objects share nothing.
class Evaluator {
 public:
  /// Throws EvaluationError if `sys` is not regular.
  Evaluator(const System& sys, std::size_t horizon);

  /// Checks the preconditions (valid history, sufficient horizon) and
  /// evaluates.
  Verdict evaluate(const History& h, const Formula& f);

  /// First strategy profile of `c` (lexicographic over sorted agents and
  /// choices) that validates the know-how clause for `body` at `h`.
  std::optional<StrategyProfile> witness(const History& h, const Coalition& c,
                                         const Formula& body);

  /// Histories indistinguishable from `h` by nonempty `c`, built step by step
  /// instead of by filtering.
  std::vector<History> indist_class(const History& h, AgentMask c);

  /// Range of history lengths at which some subformula was evaluated since
  /// construction (or the last reset_stats).
  std::size_t min_length_touched() const { return min_touched_; }
  std::size_t max_length_touched() const { return max_touched_; }
  void reset_stats();

  std::size_t horizon() const { return horizon_; }
  const System& system() const { return sys_; }

 private:
  using HistId = std::uint32_t;
  using NodeId = std::uint32_t;

  struct Node {
    Op op;
    NodeId left = 0;
    NodeId right = 0;
    AgentMask mask = 0;
    std::vector<std::uint8_t> truth;  // atoms: value per state
  };

  struct Result {
    bool value;
    bool bounded;
  };

  NodeId compile(const Formula& f);
  HistId intern(const History& h);
  void expand(HistId h);
  Result eval(HistId h, NodeId n);
  Result lookup(HistId h, NodeId n) {
    const auto& row = memo_[n];
    if (h < row.size() && row[h]) return {(row[h] & 2) != 0, (row[h] & 4) != 0};
    return eval(h, n);
  }
  Result eval_know(HistId h, AgentMask c, NodeId body);
  Result eval_how(HistId h, AgentMask c, NodeId body);
  bool how_with(HistId h, AgentMask c, std::size_t strategy, NodeId body,
                bool& bounded);
  Result eval_empty(NodeId body, std::size_t min_length);
  const std::vector<HistId>& klass(HistId h, AgentMask c);
  const std::vector<std::vector<ProfileId>>& strategies(AgentMask c);
  const std::vector<HistId>& histories_upto(std::size_t n);
  /// `j`-th successor of the last state of `h` under profile `s`.
  HistId child(HistId h, ProfileId s, std::size_t j);
  HistId add_node(HistId parent, ProfileId s, StateId w);
  History history(HistId h) const;
  std::optional<History> find_counterexample(HistId h, NodeId n);

  const System& sys_;
  std::size_t horizon_;

  std::unordered_map<Formula, NodeId> node_index_;
  std::vector<Node> nodes_;

  // Histories form a trie rooted at the states (ids 0..n-1); children are
  // created all at once, in profile then successor order.
  std::vector<HistId> parent_;
  std::vector<ProfileId> step_;  // profile leading into the node
  std::vector<StateId> last_;
  std::vector<std::uint32_t> len_;
  std::vector<std::vector<HistId>> kids_;
  std::vector<std::vector<std::uint32_t>> offsets_;  // per state, per profile

  std::vector<std::vector<std::uint8_t>> memo_;  // per node, per history
  std::unordered_map<std::uint64_t, std::uint32_t> class_of_;
  std::deque<std::vector<HistId>> classes_;  // stable references
  std::vector<AgentMask> class_masks_;
  std::unordered_map<AgentMask, std::vector<std::vector<ProfileId>>>
      strategy_groups_;
  std::vector<std::vector<HistId>> layers_;  // histories by length
  std::unordered_map<NodeId, Result> empty_know_;
  std::unordered_map<NodeId, Result> empty_how_;

  std::size_t min_touched_;
  std::size_t max_touched_;
};

/// Throws EvaluationError when `h` is invalid, `sys` is not regular, a
/// coalition names an unknown agent, or the formula uses the empty coalition
/// and horizon < length(h) + h_depth(f).
Verdict evaluate(const System& sys, const History& h, const Formula& f,
                 std::size_t horizon);

/// Same contract as evaluate, by literal enumeration over
/// histories_of_length and the raw mechanism triples, with no memoization.
Verdict evaluate_naive(const System& sys, const History& h, const Formula& f,
                       std::size_t horizon);

/// Replays the know-how clause at `h` for a given strategy profile of `c` by
/// brute force: every history indistinguishable from `h`, every complete
/// profile agreeing with `profile` on `c`, every successor.
bool replay_how(const System& sys, const History& h, AgentMask c,
                const StrategyProfile& profile, const Formula& body,
                std::size_t horizon);

/// All strategy profiles of `c` in lexicographic order.
std::vector<StrategyProfile> all_strategies(const System& sys, AgentMask c);

std::optional<Witness> witness(const System& sys, const History& h,
                               const Coalition& c, const Formula& body,
                               std::size_t horizon);

struct ClaimReport {
  bool passed = false;
  bool expected = false;
  Verdict verdict;
  std::string history;
  std::string formula;

  std::string text() const;
};

ClaimReport check_claim(const System& sys, const History& h, const Formula& f,
                        bool expected, std::size_t horizon);

/// Horizon the tools use when none is given: length(h) + h_depth(f) + 2 for
/// formulas with the empty coalition, length(h) + h_depth(f) otherwise.
std::size_t default_horizon(const History& h, const Formula& f);

}  // namespace knowhow

#endif  // KNOWHOW_CHECKER_HPP
