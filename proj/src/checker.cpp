#include "knowhow/checker.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>

namespace knowhow {

namespace {

std::uint64_t class_key(std::uint32_t h, std::uint32_t strategy_table) {
  return (std::uint64_t{h} << 32) | strategy_table;
}

}  // namespace

Evaluator::Evaluator(const System& sys, std::size_t horizon)
    : sys_(sys), horizon_(horizon) {
  auto missing = sys.check_regular();
  if (!missing.empty()) {
    auto [w, s] = missing.front();
    throw EvaluationError("system is not regular: no successor for state " +
                          sys.state_name(w) + " under profile " +
                          sys.format_profile(s));
  }
  offsets_.resize(sys.num_states());
  for (StateId w = 0; w < sys.num_states(); ++w) {
    auto& off = offsets_[w];
    off.push_back(0);
    for (ProfileId s = 0; s < sys.num_profiles(); ++s)
      off.push_back(off.back() +
                    static_cast<std::uint32_t>(sys.successors(w, s).size()));
  }
  for (StateId w = 0; w < sys.num_states(); ++w) add_node(0, 0, w);
  reset_stats();
}

void Evaluator::reset_stats() {
  min_touched_ = std::numeric_limits<std::size_t>::max();
  max_touched_ = 0;
}

Evaluator::NodeId Evaluator::compile(const Formula& f) {
  if (auto it = node_index_.find(f); it != node_index_.end()) return it->second;
  Node node;
  node.op = f.op();
  switch (f.op()) {
    case Op::falsum:
      break;
    case Op::atom:
      node.truth.resize(sys_.num_states());
      for (StateId w = 0; w < sys_.num_states(); ++w)
        node.truth[w] = sys_.satisfies(w, f.name());
      break;
    case Op::negation:
      node.left = compile(f.sub());
      break;
    case Op::implication:
      node.left = compile(f.left());
      node.right = compile(f.right());
      break;
    case Op::know:
    case Op::how:
      try {
        node.mask = sys_.mask(f.coalition());
      } catch (const SystemError& e) {
        throw EvaluationError(e.what());
      }
      node.left = compile(f.sub());
      break;
  }
  auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(node));
  memo_.emplace_back();
  node_index_.emplace(f, id);
  return id;
}

Evaluator::HistId Evaluator::intern(const History& h) {
  HistId id = h.states.at(0);
  for (std::size_t i = 0; i < h.length(); ++i) {
    const auto& succ = sys_.successors(last_[id], h.profiles[i]);
    auto it = std::find(succ.begin(), succ.end(), h.states[i + 1]);
    if (it == succ.end()) throw EvaluationError("history is not valid in system");
    id = child(id, h.profiles[i], static_cast<std::size_t>(it - succ.begin()));
  }
  return id;
}

Evaluator::HistId Evaluator::add_node(HistId parent, ProfileId s, StateId w) {
  const auto id = static_cast<HistId>(last_.size());
  const bool root = id < sys_.num_states();
  parent_.push_back(root ? id : parent);
  step_.push_back(s);
  last_.push_back(w);
  len_.push_back(root ? 0 : len_[parent] + 1);
  kids_.emplace_back();
  return id;
}

History Evaluator::history(HistId h) const {
  History out;
  out.states.resize(len_[h] + 1);
  out.profiles.resize(len_[h]);
  for (std::size_t i = len_[h] + 1; i-- > 0; h = parent_[h]) {
    out.states[i] = last_[h];
    if (i > 0) out.profiles[i - 1] = step_[h];
  }
  return out;
}

void Evaluator::expand(HistId h) {
  const StateId last = last_[h];
  std::vector<HistId> kids;
  kids.reserve(offsets_[last].back());
  for (ProfileId s = 0; s < sys_.num_profiles(); ++s)
    for (StateId w : sys_.successors(last, s)) kids.push_back(add_node(h, s, w));
  kids_[h] = std::move(kids);
}

Evaluator::HistId Evaluator::child(HistId h, ProfileId s, std::size_t j) {
  if (kids_[h].empty()) expand(h);
  return kids_[h][offsets_[last_[h]][s] + j];
}

const std::vector<std::vector<ProfileId>>& Evaluator::strategies(AgentMask c) {
  auto it = strategy_groups_.find(c);
  if (it != strategy_groups_.end()) return it->second;
  const std::size_t v = sys_.num_choices();
  std::size_t count = 1;
  for (int i = std::popcount(c); i > 0; --i) count *= v;
  std::vector<std::vector<ProfileId>> groups(count);
  for (ProfileId s = 0; s < sys_.num_profiles(); ++s) {
    std::size_t idx = 0;
    for (AgentMask m = c; m; m &= m - 1)
      idx = idx * v + sys_.vote(s, static_cast<AgentId>(std::countr_zero(m)));
    groups[idx].push_back(s);
  }
  return strategy_groups_.emplace(c, std::move(groups)).first->second;
}

const std::vector<Evaluator::HistId>& Evaluator::klass(HistId hid,
                                                       AgentMask c) {
  // Classes are keyed by (history, dense mask slot) and shared by all their
  // members.
  std::uint32_t slot;
  {
    auto it = std::find(class_masks_.begin(), class_masks_.end(), c);
    if (it == class_masks_.end()) {
      class_masks_.push_back(c);
      it = class_masks_.end() - 1;
    }
    slot = static_cast<std::uint32_t>(it - class_masks_.begin());
  }
  if (auto it = class_of_.find(class_key(hid, slot)); it != class_of_.end())
    return classes_[it->second];

  auto& groups = strategies(c);
  std::vector<std::uint32_t> strategy_of(sys_.num_profiles());
  for (std::size_t k = 0; k < groups.size(); ++k)
    for (ProfileId s : groups[k]) strategy_of[s] = static_cast<std::uint32_t>(k);

  const History target_history = history(hid);
  std::vector<HistId> layer;
  const StateId first = target_history.states[0];
  for (StateId w = 0; w < sys_.num_states(); ++w)
    if (sys_.state_indist(first, w, c)) layer.push_back(w);
  const std::size_t len = len_[hid];
  for (std::size_t i = 0; i < len; ++i) {
    const ProfileId step = target_history.profiles[i];
    const StateId target = target_history.states[i + 1];
    std::vector<HistId> next;
    for (HistId g : layer) {
      const StateId last = last_[g];
      for (ProfileId s : groups[strategy_of[step]]) {
        const auto& succ = sys_.successors(last, s);
        for (std::size_t j = 0; j < succ.size(); ++j)
          if (sys_.state_indist(target, succ[j], c)) next.push_back(child(g, s, j));
      }
    }
    layer = std::move(next);
  }
  const auto index = static_cast<std::uint32_t>(classes_.size());
  for (HistId g : layer) class_of_.emplace(class_key(g, slot), index);
  classes_.push_back(std::move(layer));
  return classes_.back();
}

const std::vector<Evaluator::HistId>& Evaluator::histories_upto(std::size_t n) {
  if (layers_.empty()) {
    std::vector<HistId> first;
    for (StateId w = 0; w < sys_.num_states(); ++w) first.push_back(w);
    layers_.push_back(std::move(first));
  }
  // Built once up to the horizon so later recursion never reallocates a
  // layer that is being iterated.
  while (layers_.size() <= std::max(n, horizon_)) {
    std::vector<HistId> next;
    const std::vector<HistId> prev = layers_.back();
    for (HistId g : prev)
      for (ProfileId s = 0; s < sys_.num_profiles(); ++s) {
        const std::size_t n = sys_.successors(last_[g], s).size();
        for (std::size_t j = 0; j < n; ++j) next.push_back(child(g, s, j));
      }
    layers_.push_back(std::move(next));
  }
  return layers_[n];
}

Evaluator::Result Evaluator::eval(HistId h, NodeId n) {
  const std::size_t len = len_[h];
  min_touched_ = std::min(min_touched_, len);
  max_touched_ = std::max(max_touched_, len);

  const Node& node = nodes_[n];
  switch (node.op) {
    case Op::falsum:
      return {false, false};
    case Op::atom:
      return {node.truth[last_[h]] != 0, false};
    default:
      break;
  }
  // memo byte: bit 0 known, bit 1 value, bit 2 bounded
  if (auto& row = memo_[n]; h < row.size() && row[h])
    return {(row[h] & 2) != 0, (row[h] & 4) != 0};

  const Op op = node.op;
  const NodeId left = node.left;
  const NodeId right = node.right;
  const AgentMask mask = node.mask;

  Result r{false, false};
  switch (op) {
    case Op::negation: {
      Result sub = eval(h, left);
      r = {!sub.value, sub.bounded};
      break;
    }
    case Op::implication: {
      Result a = eval(h, left);
      if (!a.value) {
        r = {true, a.bounded};
        break;
      }
      Result b = eval(h, right);
      r = {b.value, a.bounded || b.bounded};
      break;
    }
    case Op::know:
      r = mask ? eval_know(h, mask, left) : eval_empty(left, 0);
      break;
    case Op::how:
      r = mask ? eval_how(h, mask, left) : eval_empty(left, 1);
      break;
    default:
      break;
  }
  auto& row = memo_[n];
  if (row.size() <= h) row.resize(std::max<std::size_t>(last_.size(), h + 1), 0);
  row[h] = static_cast<std::uint8_t>(1 | (r.value ? 2 : 0) | (r.bounded ? 4 : 0));
  return r;
}

Evaluator::Result Evaluator::eval_know(HistId h, AgentMask c, NodeId body) {
  bool bounded = false;
  const auto& cls = klass(h, c);
  for (HistId g : cls) {
    Result r = lookup(g, body);
    bounded = bounded || r.bounded;
    if (!r.value) return {false, bounded};
  }
  return {true, bounded};
}

bool Evaluator::how_with(HistId h, AgentMask c, std::size_t strategy,
                         NodeId body, bool& bounded) {
  const auto& cls = klass(h, c);
  const auto& group = strategies(c)[strategy];
  for (HistId g : cls) {
    const StateId last = last_[g];
    for (ProfileId s : group) {
      const std::size_t n = sys_.successors(last, s).size();
      for (std::size_t j = 0; j < n; ++j) {
        Result r = lookup(child(g, s, j), body);
        bounded = bounded || r.bounded;
        if (!r.value) return false;
      }
    }
  }
  return true;
}

Evaluator::Result Evaluator::eval_how(HistId h, AgentMask c, NodeId body) {
  bool bounded = false;
  const std::size_t count = strategies(c).size();
  for (std::size_t k = 0; k < count; ++k)
    if (how_with(h, c, k, body, bounded)) return {true, bounded};
  return {false, bounded};
}

Evaluator::Result Evaluator::eval_empty(NodeId body, std::size_t min_length) {
  auto& cache = min_length == 0 ? empty_know_ : empty_how_;
  if (auto it = cache.find(body); it != cache.end()) return it->second;
  histories_upto(horizon_);
  Result r{true, true};
  for (std::size_t len = min_length; len <= horizon_ && r.value; ++len)
    for (HistId g : layers_[len])
      if (!eval(g, body).value) {
        r.value = false;
        break;
      }
  cache.emplace(body, r);
  return r;
}

std::optional<History> Evaluator::find_counterexample(HistId h, NodeId n) {
  const Node node = nodes_[n];
  if (node.op == Op::know && node.mask) {
    for (HistId g : klass(h, node.mask))
      if (!eval(g, node.left).value) return history(g);
    return std::nullopt;
  }
  if ((node.op == Op::know || node.op == Op::how) && !node.mask) {
    histories_upto(horizon_);
    for (std::size_t len = node.op == Op::know ? 0 : 1; len <= horizon_; ++len)
      for (HistId g : layers_[len])
        if (!eval(g, node.left).value) return history(g);
  }
  return std::nullopt;
}

Verdict Evaluator::evaluate(const History& h, const Formula& f) {
  if (!sys_.valid(h)) throw EvaluationError("history is not valid in system");
  if (uses_empty_coalition(f) && horizon_ < h.length() + h_depth(f))
    throw EvaluationError("horizon " + std::to_string(horizon_) +
                          " is too small: the formula uses the empty "
                          "coalition and needs at least " +
                          std::to_string(h.length() + h_depth(f)));
  const NodeId n = compile(f);
  const HistId hid = intern(h);
  Result r = eval(hid, n);
  Verdict v;
  v.value = r.value;
  v.bounded = r.bounded;
  v.horizon_used = horizon_;
  if (!r.value) v.counterexample = find_counterexample(hid, n);
  return v;
}

std::optional<StrategyProfile> Evaluator::witness(const History& h,
                                                  const Coalition& c,
                                                  const Formula& body) {
  const Formula f = Formula::how(c, body);
  Verdict v = evaluate(h, f);
  if (!v.value) return std::nullopt;
  const AgentMask mask = sys_.mask(c);
  StrategyProfile p;
  p.coalition = mask;
  p.votes.assign(sys_.num_agents(), 0);
  if (mask == 0) return p;
  const HistId hid = intern(h);
  const NodeId body_id = compile(body);
  const std::size_t count = strategies(mask).size();
  for (std::size_t k = 0; k < count; ++k) {
    bool bounded = false;
    if (!how_with(hid, mask, k, body_id, bounded)) continue;
    std::size_t rest = k;
    std::vector<AgentId> members;
    for (AgentMask m = mask; m; m &= m - 1)
      members.push_back(static_cast<AgentId>(std::countr_zero(m)));
    for (std::size_t i = members.size(); i-- > 0;) {
      p.votes[members[i]] = static_cast<ChoiceId>(rest % sys_.num_choices());
      rest /= sys_.num_choices();
    }
    return p;
  }
  return std::nullopt;
}

std::vector<History> Evaluator::indist_class(const History& h, AgentMask c) {
  if (c == 0) throw EvaluationError("indist_class needs a nonempty coalition");
  std::vector<History> out;
  for (HistId g : klass(intern(h), c)) out.push_back(history(g));
  return out;
}

// ------------------------------------------------------------ Free wrappers

Verdict evaluate(const System& sys, const History& h, const Formula& f,
                 std::size_t horizon) {
  Evaluator ev(sys, horizon);
  return ev.evaluate(h, f);
}

std::optional<Witness> witness(const System& sys, const History& h,
                               const Coalition& c, const Formula& body,
                               std::size_t horizon) {
  Evaluator ev(sys, horizon);
  auto p = ev.witness(h, c, body);
  if (!p) return std::nullopt;
  return Witness{*p};
}

std::vector<StrategyProfile> all_strategies(const System& sys, AgentMask c) {
  std::vector<AgentId> members;
  for (AgentMask m = c; m; m &= m - 1)
    members.push_back(static_cast<AgentId>(std::countr_zero(m)));
  std::vector<StrategyProfile> out;
  StrategyProfile p;
  p.coalition = c;
  p.votes.assign(sys.num_agents(), 0);
  while (true) {
    out.push_back(p);
    std::size_t i = members.size();
    while (i > 0) {
      --i;
      if (++p.votes[members[i]] < sys.num_choices()) break;
      p.votes[members[i]] = 0;
      if (i == 0) return out;
    }
    if (members.empty()) return out;
  }
}

std::size_t default_horizon(const History& h, const Formula& f) {
  return h.length() + h_depth(f) + (uses_empty_coalition(f) ? 2 : 0);
}

std::string ClaimReport::text() const {
  std::ostringstream os;
  os << (passed ? "PASS" : "FAIL") << "  (" << history << ") |= " << formula
     << "  expected " << (expected ? "True" : "False") << ", got "
     << (verdict.value ? "True" : "False");
  if (verdict.bounded) os << "  [bounded, horizon " << verdict.horizon_used << "]";
  return os.str();
}

ClaimReport check_claim(const System& sys, const History& h, const Formula& f,
                        bool expected, std::size_t horizon) {
  ClaimReport r;
  r.verdict = evaluate(sys, h, f, horizon);
  r.expected = expected;
  r.passed = r.verdict.value == expected;
  r.history = sys.format_history(h);
  r.formula = print(f);
  return r;
}

}  // namespace knowhow
