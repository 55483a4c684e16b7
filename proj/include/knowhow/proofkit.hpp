#ifndef KNOWHOW_PROOFKIT_HPP
#define KNOWHOW_PROOFKIT_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "knowhow/formula.hpp"

namespace knowhow {

enum class Axiom {
  truth,                             // K_C p -> p
  negative_introspection,            // !K_C p -> K_C !K_C p
  distributivity,                    // K_C(p -> q) -> (K_C p -> K_C q)
  monotonicity,                      // K_C p -> K_D p, C subset of D
  strategic_positive_introspection,  // H_C p -> K_C H_C p
  cooperation,                       // H_C(p -> q) -> (H_D p -> H_{C+D} q)
  empty_coalition,                   // K{} p -> H{} p
  perfect_recall,                    // H_D p -> H_D K_C p, D subset of C, C nonempty
  unachievability_of_falsehood,      // !H_C false
};

inline constexpr Axiom kAllAxioms[] = {
    Axiom::truth,
    Axiom::negative_introspection,
    Axiom::distributivity,
    Axiom::monotonicity,
    Axiom::strategic_positive_introspection,
    Axiom::cooperation,
    Axiom::empty_coalition,
    Axiom::perfect_recall,
    Axiom::unachievability_of_falsehood,
};

/// CamelCase name used in proof files, e.g. "PerfectRecall".
std::string_view axiom_name(Axiom a);
std::optional<Axiom> axiom_from_name(std::string_view name);

/// Every schema `f` instantiates, in enum order. Matching is syntactic:
/// repeated metavariables must bind identical subtrees and side conditions on
/// coalitions are enforced.
std::vector<Axiom> match_axiom(const Formula& f);
bool is_instance(const Formula& f, Axiom a);

/// Propositional validity, treating atoms and maximal K/H subformulas as
/// opaque variables (identical subtrees share a variable).
bool is_tautology(const Formula& f);

namespace just {
struct Tautology {};
struct AxiomInstance {
  Axiom axiom;
};
/// From line `minor` (phi) and line `major` (phi -> psi), infer psi.
struct ModusPonens {
  std::size_t minor;
  std::size_t major;
};
struct Necessitation {
  std::size_t line;
  Coalition coalition;
};
struct StrategicNecessitation {
  std::size_t line;
  Coalition coalition;
};
struct Hypothesis {
  std::size_t index;
};
}  // namespace just

using Justification =
    std::variant<just::Tautology, just::AxiomInstance, just::ModusPonens,
                 just::Necessitation, just::StrategicNecessitation,
                 just::Hypothesis>;

struct ProofLine {
  Formula formula;
  Justification justification;
  std::string label;  // as written in the file; empty for emitted lines
};

/// Line and hypothesis indices are zero-based positions.
struct Derivation {
  std::vector<Formula> hypotheses;
  std::vector<std::string> hypothesis_labels;
  std::vector<ProofLine> lines;
  std::optional<Formula> goal;
};

enum class Failure {
  none,
  empty,
  bad_index,
  formula_mismatch,
  not_a_tautology,
  schema_mismatch,
  mode_violation,
  goal_mismatch,
};

std::string_view failure_name(Failure f);

struct VerifyReport {
  bool ok = false;
  Failure failure = Failure::none;
  /// Zero-based index of the earliest failing line; unset for goal and
  /// empty-derivation failures.
  std::optional<std::size_t> line;
  std::string reason;
  /// True when the final line depends on no hypothesis.
  bool theorem = false;

  std::string text(const Derivation& d) const;
};

VerifyReport verify(const Derivation& d);

class ProofFormatError : public std::runtime_error {
 public:
  ProofFormatError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads the proof file format:
///
///     hypotheses:
///       h1: H{a} p
///     lines:
///       1: p -> p            taut
///       2: K{a} p -> p       axiom Truth
///       3: ...               mp 1 2
///       4: ...               nec{a} 3
///       5: ...               snec{} 3
///       6: ...               hyp h1
///     goal: ...
///
/// References to unknown labels are kept as out-of-range indices so that
/// verify reports them as bad indices on the offending line.
Derivation parse_proof(std::string_view text);
Derivation load_proof_file(const std::string& path);
std::string print_proof(const Derivation& d);

class DerivationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds H{C1} phi1, ..., H{Cn} phin |- H{C1 + ... + Cn} psi from a
/// hypothesis-free derivation of phi1 -> (... -> (phin -> psi)): strategic
/// necessitation with the empty coalition on the core, then one Cooperation
/// instance and two modus ponens steps per premise. Throws DerivationError
/// if the coalitions overlap or the core does not verify.
Derivation derive_superdistributivity_instance(
    std::span<const Coalition> premise_coalitions,
    std::span<const Formula> premise_formulas, const Formula& conclusion,
    const Derivation& propositional_core);

/// K_C phi1, ..., K_C phin |- K_C psi, using Distributivity in place of
/// Cooperation.
Derivation derive_knowledge_superdistributivity_instance(
    const Coalition& coalition, std::span<const Formula> premise_formulas,
    const Formula& conclusion, const Derivation& propositional_core);

/// phi1 -> (... -> (phin -> psi)).
Formula implication_chain(std::span<const Formula> premises,
                          const Formula& conclusion);

}  // namespace knowhow

#endif  // KNOWHOW_PROOFKIT_HPP
