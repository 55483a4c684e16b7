// Literal transcription of the satisfaction relation, used as an oracle for
// Evaluator. Histories are enumerated from scratch for every quantifier and
// successors are read off the raw list of mechanism triples.

#include <algorithm>

#include "knowhow/checker.hpp"

namespace knowhow {

namespace {

class NaiveEvaluator {
 public:
  NaiveEvaluator(const System& sys, std::size_t horizon)
      : sys_(sys), horizon_(horizon) {}

  bool holds(const History& h, const Formula& f) {
    switch (f.op()) {
      case Op::falsum:
        return false;
      case Op::atom:
        return sys_.satisfies(h.last(), f.name());
      case Op::negation:
        return !holds(h, f.sub());
      case Op::implication:
        return !holds(h, f.left()) || holds(h, f.right());
      case Op::know:
        return know(h, mask_of(f.coalition()), f.sub());
      case Op::how:
        return how(h, mask_of(f.coalition()), f.sub());
    }
    return false;
  }

  bool how_with(const History& h, AgentMask c, const StrategyProfile& s,
                const Formula& body) {
    for (const History& g : related(h, c, /*extend_only=*/true))
      for (ProfileId t = 0; t < sys_.num_profiles(); ++t) {
        if (!profile_agrees(s, sys_.complete_profile(t), c)) continue;
        for (const Transition& tr : sys_.mechanism())
          if (tr.from == g.last() && tr.profile == t &&
              !holds(g.extended(t, tr.to), body))
            return false;
      }
    return true;
  }

  bool bounded() const { return bounded_; }

 private:
  AgentMask mask_of(const Coalition& c) {
    try {
      return sys_.mask(c);
    } catch (const SystemError& e) {
      throw EvaluationError(e.what());
    }
  }

  // Histories g with h ~_C g. For the empty coalition that is every history,
  // cut at the horizon; for know-how only those that can still be extended
  // within it.
  std::vector<History> related(const History& h, AgentMask c,
                               bool extend_only) {
    if (c != 0) return indist_class(sys_, h, c);
    bounded_ = true;
    std::vector<History> out;
    if (extend_only && horizon_ == 0) return out;
    const std::size_t top = extend_only ? horizon_ - 1 : horizon_;
    for (std::size_t n = 0; n <= top; ++n)
      for (auto& g : histories_of_length(sys_, n)) out.push_back(std::move(g));
    return out;
  }

  bool know(const History& h, AgentMask c, const Formula& body) {
    for (const History& g : related(h, c, false))
      if (!holds(g, body)) return false;
    return true;
  }

  bool how(const History& h, AgentMask c, const Formula& body) {
    for (const StrategyProfile& s : all_strategies(sys_, c))
      if (how_with(h, c, s, body)) return true;
    return false;
  }

  const System& sys_;
  std::size_t horizon_;
  bool bounded_ = false;
};

void check_preconditions(const System& sys, const History& h, const Formula& f,
                         std::size_t horizon) {
  if (!sys.regular()) throw EvaluationError("system is not regular");
  if (!sys.valid(h)) throw EvaluationError("history is not valid in system");
  if (uses_empty_coalition(f) && horizon < h.length() + h_depth(f))
    throw EvaluationError("horizon too small for empty-coalition formula");
}

}  // namespace

Verdict evaluate_naive(const System& sys, const History& h, const Formula& f,
                       std::size_t horizon) {
  check_preconditions(sys, h, f, horizon);
  NaiveEvaluator ev(sys, horizon);
  Verdict v;
  v.value = ev.holds(h, f);
  v.bounded = ev.bounded();
  v.horizon_used = horizon;
  return v;
}

bool replay_how(const System& sys, const History& h, AgentMask c,
                const StrategyProfile& profile, const Formula& body,
                std::size_t horizon) {
  check_preconditions(sys, h, Formula::how(sys.coalition(c), body), horizon);
  NaiveEvaluator ev(sys, horizon);
  return ev.how_with(h, c, profile, body);
}

}  // namespace knowhow
