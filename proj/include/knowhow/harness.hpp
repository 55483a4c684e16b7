#ifndef KNOWHOW_HARNESS_HPP
#define KNOWHOW_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "knowhow/formula.hpp"
#include "knowhow/proofkit.hpp"
#include "knowhow/system.hpp"

namespace knowhow {

struct GenParams {
  std::uint64_t seed = 1;
  std::size_t num_states = 4;
  std::size_t num_agents = 2;
  std::size_t num_choices = 2;
  /// Expected number of successors per (state, complete profile).
  double branching = 1.5;
  std::size_t num_props = 2;  // 2 or 3 proposition tokens: p q r
  std::size_t formula_depth = 2;
  std::size_t history_depth = 3;
  std::size_t horizon = 5;
  bool allow_empty_coalition = true;
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

/// Throws std::invalid_argument on out-of-range parameters.
void validate(const GenParams& p);

/// Deterministic in `p.seed`. Every (state, profile) pair gets at least one
/// successor, so the result is regular.
System gen_system(const GenParams& p);

/// Per-system parameters used by the suites: sizes drawn uniformly up to the
/// maxima in `p`, seed derived from `p.seed` and `index`.
GenParams system_params(const GenParams& p, std::size_t index);

class FormulaGenerator {
 public:
  FormulaGenerator(std::uint64_t seed, std::vector<std::string> props,
                   std::vector<std::string> agents, bool allow_empty);

  Formula formula(std::size_t depth);
  Coalition coalition(bool allow_empty);
  Coalition coalition() { return coalition(allow_empty_); }
  Coalition nonempty_coalition() { return coalition(false); }
  /// Random subset of `c`; empty only if allowed.
  Coalition subset(const Coalition& c, bool allow_empty);
  /// Two disjoint coalitions; both nonempty when possible and required.
  std::pair<Coalition, Coalition> disjoint_pair(bool allow_empty);

  bool allow_empty() const { return allow_empty_; }
  const std::vector<std::string>& agents() const { return agents_; }
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::vector<std::string> props_;
  std::vector<std::string> agents_;
  bool allow_empty_;
};

Formula gen_formula(const GenParams& p, std::span<const std::string> props,
                    std::span<const std::string> agents);

/// Random instance of schema `a` whose metavariables are formulas of depth at
/// most `depth` and whose coalitions satisfy the side conditions.
Formula gen_axiom_instance(FormulaGenerator& gen, Axiom a, std::size_t depth);

struct Counterexample {
  std::uint64_t system_seed = 0;
  std::string schema;
  std::string formula;
  std::string history;
  std::string system;
  std::string note;
};

struct SoundnessReport {
  std::uint64_t seed = 0;
  std::size_t systems = 0;
  std::size_t instances = 0;
  std::size_t evaluations = 0;
  std::size_t bounded_evaluations = 0;
  std::size_t guard_rejections = 0;
  std::map<std::string, std::size_t> per_schema;
  std::vector<Counterexample> violations;

  void merge(const SoundnessReport& other);
  std::string text() const;
  nlohmann::json json() const;
};

enum class InstanceOutcome { checked, not_an_axiom };

/// Evaluates `instance` at every history of `sys` up to `p.history_depth`,
/// after confirming with match_axiom that it instantiates `schema`. False
/// verdicts are re-checked with evaluate_naive before being recorded.
/// Every evaluation uses horizon `p.horizon`; histories too long for an
/// empty-coalition instance at that horizon are skipped.
InstanceOutcome check_instance(const System& sys, const Formula& instance,
                               Axiom schema, const GenParams& p,
                               std::uint64_t system_seed,
                               SoundnessReport& report);

/// `num_instances` random instances (cycling through the nine schemas) on
/// one system. Instances with the empty coalition are drawn shallow enough to
/// be evaluated at every history up to `p.history_depth`.
SoundnessReport soundness_on(const System& sys, const GenParams& p,
                             std::size_t num_instances);

/// `num_systems` random systems with `num_instances` instances each.
SoundnessReport soundness_suite(const GenParams& p, std::size_t num_systems,
                                std::size_t num_instances);

struct LemmaReport {
  std::size_t systems = 0;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  /// Histories of different lengths related by the empty coalition.
  bool empty_coalition_cross_length = false;

  void merge(const LemmaReport& other);
  std::string text() const;
  nlohmann::json json() const;
};

/// Reflexivity, symmetry and transitivity of `related` over 0..n-1. Returns
/// a description of the first failure.
std::optional<std::string> check_equivalence(
    std::size_t n, const std::function<bool(std::size_t, std::size_t)>& related);

/// Exhaustive relation checks on `sys` for every coalition and every history
/// up to `depth`, plus the know-how properties on `num_formulas` random
/// formulas.
void lemma_checks(const System& sys, std::size_t depth, std::uint64_t seed,
                  std::size_t num_formulas, LemmaReport& report);

LemmaReport lemma_suite(const GenParams& p, std::size_t num_systems);

}  // namespace knowhow

#endif  // KNOWHOW_HARNESS_HPP
