#ifndef KNOWHOW_SYSTEM_HPP
#define KNOWHOW_SYSTEM_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "knowhow/formula.hpp"

namespace knowhow {

using StateId = std::uint32_t;
using AgentId = std::uint32_t;
using ChoiceId = std::uint32_t;
/// Index of a complete profile (one choice per agent). Agents are ordered by
/// name and choices by token, the first agent is the most significant digit,
/// so increasing ids enumerate profiles lexicographically.
using ProfileId = std::uint32_t;
/// Coalition resolved against a system; bit i is agent i.
using AgentMask = std::uint64_t;

inline constexpr std::size_t kMaxAgents = 64;

/// Alternating sequence w0, s1, w1, ..., sn, wn. Validity against a
/// mechanism is checked by System::valid.
struct History {
  std::vector<StateId> states;
  std::vector<ProfileId> profiles;

  std::size_t length() const { return profiles.size(); }
  StateId last() const { return states.back(); }
  History extended(ProfileId s, StateId w) const;
  History prefix() const;  // drops the last step; length() must be > 0

  bool operator==(const History&) const = default;
  auto operator<=>(const History&) const = default;
};

struct HistoryHash {
  std::size_t operator()(const History& h) const noexcept;
};

/// One choice per member of `coalition`; `votes` is indexed by AgentId and
/// only entries of members are meaningful.
struct StrategyProfile {
  AgentMask coalition = 0;
  std::vector<ChoiceId> votes;

  bool operator==(const StrategyProfile&) const = default;
};

class SystemError : public std::runtime_error {
 public:
  explicit SystemError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Name-level description of a system, as read from a model file. Transition
/// patterns constrain the listed agents and leave the others free.
struct SystemDescription {
  struct Pattern {
    std::string from;
    std::vector<std::pair<std::string, std::string>> votes;
    std::string to;
    std::size_t line = 0;
  };

  std::vector<std::string> agents;
  std::vector<std::string> choices;
  std::vector<std::string> states;
  std::map<std::string, std::vector<std::vector<std::string>>> indist;
  std::map<std::string, std::vector<std::string>> valuation;
  std::vector<Pattern> transitions;
};

struct Transition {
  StateId from;
  ProfileId profile;
  StateId to;
  auto operator<=>(const Transition&) const = default;
};

/// Finite epistemic transition system with an extensional mechanism.
/// Immutable after construction.
class EpistemicTransitionSystem {
 public:
  /// Validates names, partitions and patterns; does not require regularity
  /// (see check_regular).
  explicit EpistemicTransitionSystem(const SystemDescription& description);

  std::size_t num_states() const { return states_.size(); }
  std::size_t num_agents() const { return agents_.size(); }
  std::size_t num_choices() const { return choices_.size(); }
  std::size_t num_profiles() const { return num_profiles_; }
  AgentMask all_agents() const;

  const std::string& state_name(StateId w) const { return states_.at(w); }
  const std::string& agent_name(AgentId a) const { return agents_.at(a); }
  const std::string& choice_name(ChoiceId v) const { return choices_.at(v); }
  StateId state_id(std::string_view name) const;
  AgentId agent_id(std::string_view name) const;
  ChoiceId choice_id(std::string_view name) const;
  const std::vector<std::string>& agents() const { return agents_; }
  const std::vector<std::string>& choices() const { return choices_; }
  const std::vector<std::string>& states() const { return states_; }

  /// Throws SystemError on an agent the system does not declare.
  AgentMask mask(const Coalition& c) const;
  Coalition coalition(AgentMask m) const;

  bool state_indist(StateId w1, StateId w2, AgentMask c) const;
  /// Block index of `w` in agent `a`'s partition.
  std::size_t block_of(AgentId a, StateId w) const {
    return block_[a][w];
  }

  ChoiceId vote(ProfileId s, AgentId a) const {
    return profile_votes_[static_cast<std::size_t>(s) * agents_.size() + a];
  }
  ProfileId profile(std::span<const ChoiceId> votes) const;
  StrategyProfile complete_profile(ProfileId s) const;

  std::span<const StateId> successors(StateId w, ProfileId s) const {
    return successors_[static_cast<std::size_t>(w) * num_profiles_ + s];
  }
  const std::vector<Transition>& mechanism() const { return mechanism_; }
  bool has_transition(StateId from, ProfileId s, StateId to) const;

  /// Empty for propositions the valuation does not mention.
  bool satisfies(StateId w, std::string_view prop) const;
  std::vector<std::string> propositions() const;

  /// (state, profile) pairs without a successor.
  std::vector<std::pair<StateId, ProfileId>> check_regular() const;
  bool regular() const { return check_regular().empty(); }

  bool valid(const History& h) const;

  std::string format_profile(ProfileId s) const;  // "a=0,b=1"
  std::string format_strategy(const StrategyProfile& s) const;
  std::string format_history(const History& h) const;  // "w0 ; a=1 ; w1"
  /// Parses a history literal and checks it against the mechanism.
  History parse_history(std::string_view literal) const;

  /// Model-file text that load_system reads back to an equal system.
  std::string to_text() const;

 private:
  std::vector<std::string> agents_;
  std::vector<std::string> choices_;
  std::vector<std::string> states_;
  std::map<std::string, StateId, std::less<>> state_index_;
  std::vector<std::vector<std::size_t>> block_;  // [agent][state]
  std::size_t num_profiles_ = 1;
  std::vector<ChoiceId> profile_votes_;
  std::vector<Transition> mechanism_;
  std::vector<std::vector<StateId>> successors_;
  std::map<std::string, std::vector<bool>, std::less<>> valuation_;
};

using System = EpistemicTransitionSystem;

/// Parses the line-oriented model format. Throws SystemError.
System load_system(std::string_view text);
System load_system_file(const std::string& path);

std::vector<std::pair<StateId, ProfileId>> check_regular(const System& sys);

/// Name-level query; true for the empty coalition.
bool state_indist(const System& sys, std::string_view w1, std::string_view w2,
                  const Coalition& c);

/// Throws std::invalid_argument if `c` is not contained in both domains.
bool profile_agrees(const StrategyProfile& s1, const StrategyProfile& s2,
                    AgentMask c);

bool hist_indist(const System& sys, const History& h1, const History& h2,
                 AgentMask c);

std::vector<History> extensions(const System& sys, const History& h);

/// All histories with exactly `n` profiles, starting anywhere.
std::vector<History> histories_of_length(const System& sys, std::size_t n);

/// Histories indistinguishable from `h` by nonempty `c`, by filtering
/// histories_of_length. Throws std::invalid_argument for the empty coalition.
std::vector<History> indist_class(const System& sys, const History& h,
                                  AgentMask c);

}  // namespace knowhow

#endif  // KNOWHOW_SYSTEM_HPP
