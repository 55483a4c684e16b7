#include "knowhow/harness.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "knowhow/checker.hpp"

namespace knowhow {

namespace {

// Distribution objects are avoided so that sequences depend only on the
// engine, which the standard pins down exactly.
std::size_t below(std::mt19937_64& rng, std::size_t n) {
  return n <= 1 ? 0 : static_cast<std::size_t>(rng() % n);
}

bool coin(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1p-53 < p;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const char* const kProps[] = {"p", "q", "r"};

std::vector<std::string> agent_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(1, static_cast<char>('a' + i));
  return out;
}

std::size_t thread_count(const GenParams& p, std::size_t jobs) {
  std::size_t t = p.threads ? p.threads : std::thread::hardware_concurrency();
  return std::clamp<std::size_t>(t, 1, std::max<std::size_t>(jobs, 1));
}

// Runs job(i) for i in [0, n) on up to `threads` workers and returns the
// results in index order.
template <typename R, typename F>
std::vector<R> parallel_map(std::size_t n, std::size_t threads, F job) {
  std::vector<R> out(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) out[i] = job(i);
  };
  std::vector<std::future<void>> pool;
  for (std::size_t t = 1; t < threads; ++t)
    pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();
  return out;
}

std::vector<History> histories_upto(const System& sys, std::size_t depth) {
  std::vector<History> out;
  for (std::size_t n = 0; n <= depth; ++n)
    for (auto& h : histories_of_length(sys, n)) out.push_back(std::move(h));
  return out;
}

}  // namespace

void validate(const GenParams& p) {
  auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
  if (p.num_states < 1) fail("num_states must be at least 1");
  if (p.num_agents < 1 || p.num_agents > 8) fail("num_agents must be in [1, 8]");
  if (p.num_choices < 1 || p.num_choices > 8) fail("num_choices must be in [1, 8]");
  if (p.num_props < 1 || p.num_props > 3) fail("num_props must be in [1, 3]");
  if (!(p.branching >= 1.0)) fail("branching must be at least 1");
  if (p.horizon < p.history_depth + p.formula_depth)
    fail("horizon must be at least history_depth + formula_depth");
  if (p.allow_empty_coalition && p.horizon <= p.history_depth)
    fail("horizon must exceed history_depth when the empty coalition is allowed");
}

System gen_system(const GenParams& p) {
  validate(p);
  std::mt19937_64 rng(p.seed);
  SystemDescription d;
  d.agents = agent_names(p.num_agents);
  for (std::size_t i = 0; i < p.num_choices; ++i) d.choices.push_back(std::to_string(i));
  for (std::size_t i = 0; i < p.num_states; ++i) d.states.push_back("w" + std::to_string(i));
  const std::size_t n = p.num_states;

  for (const auto& a : d.agents) {
    std::size_t k = 1 + below(rng, n);
    std::vector<std::vector<std::string>> blocks(k);
    for (const auto& w : d.states) blocks[below(rng, k)].push_back(w);
    std::erase_if(blocks, [](const auto& b) { return b.empty(); });
    d.indist[a] = std::move(blocks);
  }

  for (std::size_t i = 0; i < p.num_props; ++i) {
    auto& ws = d.valuation[kProps[i]];
    for (const auto& w : d.states)
      if (coin(rng, 0.5)) ws.push_back(w);
  }

  const double extra = n > 1 ? std::min(1.0, (p.branching - 1.0) / double(n - 1)) : 0.0;
  std::vector<std::size_t> votes(p.num_agents, 0);
  for (const auto& from : d.states) {
    std::fill(votes.begin(), votes.end(), 0);
    while (true) {
      SystemDescription::Pattern pat;
      pat.from = from;
      for (std::size_t a = 0; a < p.num_agents; ++a)
        pat.votes.emplace_back(d.agents[a], d.choices[votes[a]]);
      std::size_t first = below(rng, n);
      for (std::size_t w = 0; w < n; ++w) {
        if (w != first && !coin(rng, extra)) continue;
        pat.to = d.states[w];
        d.transitions.push_back(pat);
      }
      std::size_t a = p.num_agents;
      while (a > 0 && ++votes[a - 1] == p.num_choices) votes[--a] = 0;
      if (a == 0) break;
    }
  }
  return System(d);
}

GenParams system_params(const GenParams& p, std::size_t index) {
  GenParams q = p;
  q.seed = splitmix(p.seed ^ splitmix(index + 1));
  std::mt19937_64 rng(q.seed ^ 0x5bd1e995ULL);
  q.num_states = 1 + below(rng, p.num_states);
  if (p.num_states >= 2) q.num_states = std::max<std::size_t>(q.num_states, 2);
  q.num_agents = 1 + below(rng, p.num_agents);
  q.num_choices = 1 + below(rng, p.num_choices);
  q.num_props = std::min<std::size_t>(3, 2 + below(rng, 2));
  q.num_props = std::min(q.num_props, std::max<std::size_t>(p.num_props, 2));
  return q;
}

FormulaGenerator::FormulaGenerator(std::uint64_t seed,
                                   std::vector<std::string> props,
                                   std::vector<std::string> agents,
                                   bool allow_empty)
    : rng_(seed),
      props_(std::move(props)),
      agents_(std::move(agents)),
      allow_empty_(allow_empty) {
  if (props_.empty()) throw std::invalid_argument("no propositions to draw from");
  if (agents_.empty()) throw std::invalid_argument("no agents to draw from");
}

Formula FormulaGenerator::formula(std::size_t depth) {
  auto leaf = [&] {
    if (coin(rng_, 0.1)) return Formula::falsum();
    return Formula::atom(props_[below(rng_, props_.size())]);
  };
  if (depth == 0 || coin(rng_, 0.15)) return leaf();
  auto sub = [&] { return formula(below(rng_, depth)); };
  switch (below(rng_, 4)) {
    case 0:
      return Formula::negation(formula(depth - 1));
    case 1: {
      // one side keeps the full depth so the bound is usually reached
      Formula deep = formula(depth - 1);
      Formula other = sub();
      return coin(rng_, 0.5) ? Formula::implies(deep, other)
                             : Formula::implies(other, deep);
    }
    case 2:
      return Formula::know(coalition(), formula(depth - 1));
    default:
      return Formula::how(coalition(), formula(depth - 1));
  }
}

Coalition FormulaGenerator::coalition(bool allow_empty) {
  if (allow_empty && coin(rng_, 0.125)) return Coalition{};
  std::vector<std::string> members;
  while (members.empty())
    for (const auto& a : agents_)
      if (coin(rng_, 0.5)) members.push_back(a);
  return Coalition(std::move(members));
}

Coalition FormulaGenerator::subset(const Coalition& c, bool allow_empty) {
  if (c.empty()) return c;
  std::vector<std::string> members;
  do {
    members.clear();
    for (const auto& a : c.members())
      if (coin(rng_, 0.5)) members.push_back(a);
  } while (members.empty() && !allow_empty);
  return Coalition(std::move(members));
}

std::pair<Coalition, Coalition> FormulaGenerator::disjoint_pair(bool allow_empty) {
  if (agents_.size() == 1) {
    // no two disjoint nonempty coalitions exist
    bool left = coin(rng_, 0.5);
    Coalition one{agents_[0]};
    return left ? std::pair{one, Coalition{}} : std::pair{Coalition{}, one};
  }
  std::vector<std::string> c, d;
  do {
    c.clear();
    d.clear();
    for (const auto& a : agents_) {
      switch (below(rng_, 3)) {
        case 0: c.push_back(a); break;
        case 1: d.push_back(a); break;
        default: break;
      }
    }
  } while (!allow_empty && (c.empty() || d.empty()));
  return {Coalition(std::move(c)), Coalition(std::move(d))};
}

Formula gen_formula(const GenParams& p, std::span<const std::string> props,
                    std::span<const std::string> agents) {
  FormulaGenerator gen(p.seed, {props.begin(), props.end()},
                       {agents.begin(), agents.end()}, p.allow_empty_coalition);
  return gen.formula(p.formula_depth);
}

Formula gen_axiom_instance(FormulaGenerator& gen, Axiom a, std::size_t depth) {
  const bool e = gen.allow_empty();
  Formula phi = gen.formula(depth);
  switch (a) {
    case Axiom::truth: {
      Formula k = Formula::know(gen.coalition(), phi);
      return Formula::implies(k, phi);
    }
    case Axiom::negative_introspection: {
      Formula nk = Formula::negation(Formula::know(gen.coalition(), phi));
      Coalition c = nk.sub().coalition();
      return Formula::implies(nk, Formula::know(c, nk));
    }
    case Axiom::distributivity: {
      Coalition c = gen.coalition();
      Formula psi = gen.formula(depth);
      return Formula::implies(
          Formula::know(c, Formula::implies(phi, psi)),
          Formula::implies(Formula::know(c, phi), Formula::know(c, psi)));
    }
    case Axiom::monotonicity: {
      Coalition c = gen.coalition();
      Coalition d = c.united(gen.subset(Coalition(gen.agents()), true));
      return Formula::implies(Formula::know(c, phi), Formula::know(d, phi));
    }
    case Axiom::strategic_positive_introspection: {
      Coalition c = gen.coalition();
      Formula h = Formula::how(c, phi);
      return Formula::implies(h, Formula::know(c, h));
    }
    case Axiom::cooperation: {
      auto [c, d] = gen.disjoint_pair(e);
      Formula psi = gen.formula(depth);
      return Formula::implies(
          Formula::how(c, Formula::implies(phi, psi)),
          Formula::implies(Formula::how(d, phi), Formula::how(c.united(d), psi)));
    }
    case Axiom::empty_coalition:
      return Formula::implies(Formula::know({}, phi), Formula::how({}, phi));
    case Axiom::perfect_recall: {
      Coalition c = gen.nonempty_coalition();
      Coalition d = gen.subset(c, e);
      return Formula::implies(Formula::how(d, phi),
                              Formula::how(d, Formula::know(c, phi)));
    }
    case Axiom::unachievability_of_falsehood:
      return Formula::negation(Formula::how(gen.coalition(), Formula::falsum()));
  }
  throw std::logic_error("unknown axiom");
}

// ---------------------------------------------------------------- soundness

namespace {

InstanceOutcome check_instance_at(Evaluator& ev, const System& sys,
                                  std::span<const History> histories,
                                  const Formula& instance, Axiom schema,
                                  std::uint64_t system_seed,
                                  SoundnessReport& report) {
  if (!is_instance(instance, schema)) {
    ++report.guard_rejections;
    return InstanceOutcome::not_an_axiom;
  }
  ++report.instances;
  ++report.per_schema[std::string(axiom_name(schema))];
  const bool empty = uses_empty_coalition(instance);
  const std::size_t need = h_depth(instance);
  for (const History& h : histories) {
    if (empty && h.length() + need > ev.horizon()) continue;
    Verdict v = ev.evaluate(h, instance);
    ++report.evaluations;
    if (v.bounded) ++report.bounded_evaluations;
    if (v.value) continue;
    Verdict naive = evaluate_naive(sys, h, instance, ev.horizon());
    Counterexample cx{system_seed,
                      std::string(axiom_name(schema)),
                      print(instance),
                      sys.format_history(h),
                      sys.to_text(),
                      naive.value ? "evaluator and oracle disagree" : ""};
    report.violations.push_back(std::move(cx));
  }
  return InstanceOutcome::checked;
}

// Regenerates with shallower metavariables until an empty-coalition instance
// can be evaluated at every history up to the requested depth.
Formula fitting_instance(FormulaGenerator& gen, Axiom a, const GenParams& p) {
  std::size_t depth = p.formula_depth;
  while (true) {
    Formula f = gen_axiom_instance(gen, a, depth);
    if (!uses_empty_coalition(f) || p.history_depth + h_depth(f) <= p.horizon)
      return f;
    if (depth > 0) --depth;
  }
}

}  // namespace

InstanceOutcome check_instance(const System& sys, const Formula& instance,
                               Axiom schema, const GenParams& p,
                               std::uint64_t system_seed,
                               SoundnessReport& report) {
  Evaluator ev(sys, p.horizon);
  auto hs = histories_upto(sys, p.history_depth);
  return check_instance_at(ev, sys, hs, instance, schema, system_seed, report);
}

SoundnessReport soundness_on(const System& sys, const GenParams& p,
                             std::size_t num_instances) {
  validate(p);
  SoundnessReport report;
  report.seed = p.seed;
  report.systems = 1;
  std::vector<std::string> props;
  for (const auto& prop : sys.propositions()) props.push_back(prop);
  if (props.empty()) props.push_back("p");
  FormulaGenerator gen(splitmix(p.seed ^ 0xa5a5a5a5ULL), props, sys.agents(),
                       p.allow_empty_coalition);
  Evaluator ev(sys, p.horizon);
  auto hs = histories_upto(sys, p.history_depth);
  const std::size_t nschemas = std::size(kAllAxioms);
  for (std::size_t i = 0; i < num_instances; ++i) {
    Axiom a = kAllAxioms[i % nschemas];
    if (!p.allow_empty_coalition && a == Axiom::empty_coalition) continue;
    Formula f = fitting_instance(gen, a, p);
    check_instance_at(ev, sys, hs, f, a, p.seed, report);
  }
  return report;
}

SoundnessReport soundness_suite(const GenParams& p, std::size_t num_systems,
                                std::size_t num_instances) {
  validate(p);
  auto parts = parallel_map<SoundnessReport>(
      num_systems, thread_count(p, num_systems), [&](std::size_t i) {
        GenParams q = system_params(p, i);
        return soundness_on(gen_system(q), q, num_instances);
      });
  SoundnessReport total;
  total.seed = p.seed;
  for (const auto& r : parts) total.merge(r);
  return total;
}

void SoundnessReport::merge(const SoundnessReport& o) {
  systems += o.systems;
  instances += o.instances;
  evaluations += o.evaluations;
  bounded_evaluations += o.bounded_evaluations;
  guard_rejections += o.guard_rejections;
  for (const auto& [k, v] : o.per_schema) per_schema[k] += v;
  violations.insert(violations.end(), o.violations.begin(), o.violations.end());
}

std::string SoundnessReport::text() const {
  std::ostringstream os;
  os << "seed " << seed << ": " << systems << " systems, " << instances
     << " instances, " << evaluations << " evaluations (" << bounded_evaluations
     << " bounded), " << guard_rejections << " rejected by guard, "
     << violations.size() << " violations\n";
  for (const auto& [k, v] : per_schema) os << "  " << k << ": " << v << '\n';
  for (const auto& cx : violations) {
    os << "VIOLATION " << cx.schema << " at (" << cx.history << "): " << cx.formula;
    if (!cx.note.empty()) os << " [" << cx.note << "]";
    os << "\n  system seed " << cx.system_seed << "\n";
    std::istringstream sys(cx.system);
    for (std::string line; std::getline(sys, line);) os << "    " << line << '\n';
  }
  return os.str();
}

nlohmann::json SoundnessReport::json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["systems"] = systems;
  j["instances"] = instances;
  j["evaluations"] = evaluations;
  j["bounded_evaluations"] = bounded_evaluations;
  j["guard_rejections"] = guard_rejections;
  j["per_schema"] = per_schema;
  j["violations"] = nlohmann::json::array();
  for (const auto& cx : violations)
    j["violations"].push_back({{"system_seed", cx.system_seed},
                               {"schema", cx.schema},
                               {"formula", cx.formula},
                               {"history", cx.history},
                               {"system", cx.system},
                               {"note", cx.note}});
  return j;
}

// -------------------------------------------------------------------- lemmas

namespace {

class BitRows {
 public:
  explicit BitRows(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_) {}
  void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= 1ULL << (j % 64); }
  bool test(std::size_t i, std::size_t j) const {
    return bits_[i * words_ + j / 64] >> (j % 64) & 1;
  }
  bool rows_equal(std::size_t i, std::size_t j) const {
    return std::equal(row(i), row(i) + words_, row(j));
  }
  bool row_within(std::size_t i, const BitRows& other) const {
    for (std::size_t w = 0; w < words_; ++w)
      if (row(i)[w] & ~other.row(i)[w]) return false;
    return true;
  }
  std::size_t size() const { return n_; }

 private:
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }
  std::size_t n_, words_;
  std::vector<std::uint64_t> bits_;
};

BitRows tabulate(std::size_t n,
                 const std::function<bool(std::size_t, std::size_t)>& related) {
  BitRows rows(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (related(i, j)) rows.set(i, j);
  return rows;
}

std::optional<std::string> equivalence_failure(const BitRows& r) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!r.test(i, i)) return "not reflexive at " + std::to_string(i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (r.test(i, j) != r.test(j, i))
        return "not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")";
  // With reflexivity and symmetry in place, transitivity holds exactly when
  // related elements have identical rows.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (r.test(i, j) && !r.rows_equal(i, j))
        return "not transitive through (" + std::to_string(i) + ", " +
               std::to_string(j) + ")";
  return std::nullopt;
}

struct LemmaContext {
  const System& sys;
  std::string name;
  LemmaReport& report;

  void check(bool ok, const std::string& what) {
    ++report.checks;
    if (!ok) report.failures.push_back(name + ": " + what);
  }
};

void relation_checks(LemmaContext& cx, std::size_t depth) {
  const System& sys = cx.sys;
  const AgentMask all = sys.all_agents();
  const std::vector<History> hs = histories_upto(sys, depth);
  std::unordered_map<History, std::size_t, HistoryHash> index;
  for (std::size_t i = 0; i < hs.size(); ++i) index.emplace(hs[i], i);
  Evaluator ev(sys, depth);

  std::vector<BitRows> rows;
  for (AgentMask c = 0; c <= all; ++c) {
    if ((c & ~all) != 0) continue;
    const std::string tag = sys.coalition(c).to_string();

    auto e = check_equivalence(sys.num_states(), [&](std::size_t i, std::size_t j) {
      return sys.state_indist(StateId(i), StateId(j), c);
    });
    cx.check(!e, "state indistinguishability for " + tag + ": " + e.value_or(""));

    e = check_equivalence(sys.num_profiles(), [&](std::size_t i, std::size_t j) {
      return profile_agrees(sys.complete_profile(ProfileId(i)),
                            sys.complete_profile(ProfileId(j)), c);
    });
    cx.check(!e, "profile agreement for " + tag + ": " + e.value_or(""));

    BitRows r = tabulate(hs.size(), [&](std::size_t i, std::size_t j) {
      return hist_indist(sys, hs[i], hs[j], c);
    });
    e = equivalence_failure(r);
    cx.check(!e, "history indistinguishability for " + tag + ": " + e.value_or(""));

    bool lengths = true, decomposes = true, same_class = true;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      for (std::size_t j = 0; j < hs.size(); ++j) {
        const bool rel = r.test(i, j);
        if (hs[i].length() != hs[j].length()) {
          if (rel && c != 0) lengths = false;
          if (rel && c == 0) cx.report.empty_coalition_cross_length = true;
          continue;
        }
        if (c == 0 || hs[i].length() == 0) continue;
        const History& h = hs[i];
        const History& g = hs[j];
        const bool parts =
            r.test(index.at(h.prefix()), index.at(g.prefix())) &&
            profile_agrees(sys.complete_profile(h.profiles.back()),
                           sys.complete_profile(g.profiles.back()), c) &&
            sys.state_indist(h.last(), g.last(), c);
        if (parts != rel) decomposes = false;
      }
      if (c != 0) {
        auto klass = ev.indist_class(hs[i], c);
        std::size_t members = 0;
        for (const auto& g : klass) {
          auto it = index.find(g);
          if (it == index.end() || !r.test(i, it->second)) same_class = false;
          else ++members;
        }
        std::size_t expected = 0;
        for (std::size_t j = 0; j < hs.size(); ++j) expected += r.test(i, j);
        if (members != expected || klass.size() != expected) same_class = false;
      }
    }
    if (c != 0) {
      cx.check(lengths, "related histories of different length for " + tag);
      cx.check(decomposes, "step decomposition fails for " + tag);
      cx.check(same_class, "stepwise class differs from filtered class for " + tag);
    }
    rows.push_back(std::move(r));
  }

  // Larger coalitions distinguish more: C subset of D means ~_D within ~_C.
  for (AgentMask c = 0; c <= all; ++c)
    for (AgentMask d = c; d <= all; ++d) {
      if ((c & d) != c) continue;
      bool within = true;
      for (std::size_t i = 0; i < hs.size() && within; ++i)
        within = rows[d].row_within(i, rows[c]);
      cx.check(within, "indistinguishability not antitone from " +
                           sys.coalition(c).to_string() + " to " +
                           sys.coalition(d).to_string());
    }
}

void semantic_checks(LemmaContext& cx, std::size_t depth, std::uint64_t seed,
                     std::size_t num_formulas) {
  const System& sys = cx.sys;
  std::vector<std::string> props = sys.propositions();
  if (props.empty()) props.push_back("p");
  FormulaGenerator gen(seed, props, sys.agents(), false);
  const std::vector<History> hs = histories_upto(sys, depth);
  Evaluator ev(sys, depth);
  auto holds = [&](const History& h, const Formula& f) { return ev.evaluate(h, f).value; };

  for (std::size_t k = 0; k < num_formulas; ++k) {
    Formula phi = gen.formula(1 + k % 2);
    Formula psi = gen.formula(1);
    Coalition c = gen.nonempty_coalition();
    Coalition sub = gen.subset(c, false);
    Coalition super = c.united(gen.subset(Coalition(sys.agents()), true));
    Formula hc = Formula::how(c, phi);
    bool spi = true, sni = true, recall = true, subset = true, coop = true;
    auto disjoint = gen.disjoint_pair(false);
    const bool can_cooperate = sys.num_agents() >= 2;
    for (const History& h : hs) {
      const bool has = holds(h, hc);
      const bool known = holds(h, Formula::know(c, hc));
      const bool known_not = holds(h, Formula::know(c, Formula::negation(hc)));
      if (has && !known) spi = false;
      if (!has && !known_not) sni = false;
      if (holds(h, Formula::how(sub, phi)) &&
          !holds(h, Formula::how(sub, Formula::know(c, phi))))
        recall = false;
      if (has && !holds(h, Formula::how(super, phi))) subset = false;
      if (can_cooperate) {
        const auto& [d1, d2] = disjoint;
        if (holds(h, Formula::how(d1, Formula::implies(phi, psi))) &&
            holds(h, Formula::how(d2, phi)) &&
            !holds(h, Formula::how(d1.united(d2), psi)))
          coop = false;
      }
    }
    const std::string at = " for " + print(hc);
    cx.check(spi, "strategic positive introspection" + at);
    cx.check(sni, "strategic negative introspection" + at);
    cx.check(recall, "perfect recall with " + sub.to_string() + at);
    cx.check(subset, "know-how monotone into " + super.to_string() + at);
    if (can_cooperate) cx.check(coop, "cooperation" + at);
  }
}

}  // namespace

std::optional<std::string> check_equivalence(
    std::size_t n, const std::function<bool(std::size_t, std::size_t)>& related) {
  return equivalence_failure(tabulate(n, related));
}

void lemma_checks(const System& sys, std::size_t depth, std::uint64_t seed,
                  std::size_t num_formulas, LemmaReport& report) {
  if (!sys.regular()) throw std::invalid_argument("lemma checks need a regular system");
  if (sys.num_agents() > 6)
    throw std::invalid_argument("lemma checks enumerate coalitions; at most 6 agents");
  LemmaContext cx{sys, "system " + std::to_string(report.systems), report};
  relation_checks(cx, depth);
  semantic_checks(cx, depth, seed, num_formulas);
  ++report.systems;
}

LemmaReport lemma_suite(const GenParams& p, std::size_t num_systems) {
  validate(p);
  auto parts = parallel_map<LemmaReport>(
      num_systems, thread_count(p, num_systems), [&](std::size_t i) {
        GenParams q = system_params(p, i);
        LemmaReport r;
        lemma_checks(gen_system(q), q.history_depth, splitmix(q.seed), 8, r);
        for (auto& f : r.failures) f = "seed " + std::to_string(q.seed) + " " + f;
        return r;
      });
  LemmaReport total;
  for (const auto& r : parts) total.merge(r);
  return total;
}

void LemmaReport::merge(const LemmaReport& o) {
  systems += o.systems;
  checks += o.checks;
  failures.insert(failures.end(), o.failures.begin(), o.failures.end());
  empty_coalition_cross_length |= o.empty_coalition_cross_length;
}

std::string LemmaReport::text() const {
  std::ostringstream os;
  os << systems << " systems, " << checks << " checks, " << failures.size()
     << " failures";
  if (empty_coalition_cross_length)
    os << "; empty coalition relates histories of different lengths";
  os << '\n';
  for (const auto& f : failures) os << "FAIL " << f << '\n';
  return os.str();
}

nlohmann::json LemmaReport::json() const {
  return {{"systems", systems},
          {"checks", checks},
          {"failures", failures},
          {"empty_coalition_cross_length", empty_coalition_cross_length}};
}

}  // namespace knowhow
