#include "knowhow/proofkit.hpp"

#include <sstream>
#include <unordered_map>

namespace knowhow {

namespace {

constexpr std::pair<Axiom, std::string_view> kNames[] = {
    {Axiom::truth, "Truth"},
    {Axiom::negative_introspection, "NegativeIntrospection"},
    {Axiom::distributivity, "Distributivity"},
    {Axiom::monotonicity, "Monotonicity"},
    {Axiom::strategic_positive_introspection, "StrategicPositiveIntrospection"},
    {Axiom::cooperation, "Cooperation"},
    {Axiom::empty_coalition, "EmptyCoalition"},
    {Axiom::perfect_recall, "PerfectRecall"},
    {Axiom::unachievability_of_falsehood, "UnachievabilityOfFalsehood"},
};

bool is_op(const Formula& f, Op op) { return f.op() == op; }

// Shape "M_C x -> rhs" for the outer implication of most schemas.
bool modal_antecedent(const Formula& f, Op op) {
  return is_op(f, Op::implication) && is_op(f.left(), op);
}

bool match(const Formula& f, Axiom a) {
  switch (a) {
    case Axiom::truth:
      return modal_antecedent(f, Op::know) && f.left().sub() == f.right();

    case Axiom::negative_introspection: {
      // !K_C p -> K_C !K_C p
      if (!is_op(f, Op::implication) || !is_op(f.left(), Op::negation))
        return false;
      const Formula& nk = f.left();
      const Formula& rhs = f.right();
      return is_op(nk.sub(), Op::know) && is_op(rhs, Op::know) &&
             rhs.coalition() == nk.sub().coalition() && rhs.sub() == nk;
    }

    case Axiom::distributivity: {
      // K_C(p -> q) -> (K_C p -> K_C q)
      if (!modal_antecedent(f, Op::know)) return false;
      const Formula& k_imp = f.left();
      const Formula& rhs = f.right();
      if (!is_op(k_imp.sub(), Op::implication) ||
          !is_op(rhs, Op::implication) || !is_op(rhs.left(), Op::know) ||
          !is_op(rhs.right(), Op::know))
        return false;
      const Coalition& c = k_imp.coalition();
      return rhs.left().coalition() == c && rhs.right().coalition() == c &&
             rhs.left().sub() == k_imp.sub().left() &&
             rhs.right().sub() == k_imp.sub().right();
    }

    case Axiom::monotonicity:
      return modal_antecedent(f, Op::know) && is_op(f.right(), Op::know) &&
             f.left().sub() == f.right().sub() &&
             f.left().coalition().subset_of(f.right().coalition());

    case Axiom::strategic_positive_introspection:
      // H_C p -> K_C H_C p
      return modal_antecedent(f, Op::how) && is_op(f.right(), Op::know) &&
             f.right().coalition() == f.left().coalition() &&
             f.right().sub() == f.left();

    case Axiom::cooperation: {
      // H_C(p -> q) -> (H_D p -> H_E q), C and D disjoint, E = C + D
      if (!modal_antecedent(f, Op::how)) return false;
      const Formula& h_imp = f.left();
      const Formula& rhs = f.right();
      if (!is_op(h_imp.sub(), Op::implication) ||
          !is_op(rhs, Op::implication) || !is_op(rhs.left(), Op::how) ||
          !is_op(rhs.right(), Op::how))
        return false;
      const Coalition& c = h_imp.coalition();
      const Coalition& d = rhs.left().coalition();
      return rhs.left().sub() == h_imp.sub().left() &&
             rhs.right().sub() == h_imp.sub().right() && c.disjoint_from(d) &&
             rhs.right().coalition() == c.united(d);
    }

    case Axiom::empty_coalition:
      return modal_antecedent(f, Op::know) && is_op(f.right(), Op::how) &&
             f.left().coalition().empty() && f.right().coalition().empty() &&
             f.left().sub() == f.right().sub();

    case Axiom::perfect_recall: {
      // H_D p -> H_D K_C p, D subset of C, C nonempty
      if (!modal_antecedent(f, Op::how) || !is_op(f.right(), Op::how))
        return false;
      const Formula& rhs = f.right();
      if (rhs.coalition() != f.left().coalition() ||
          !is_op(rhs.sub(), Op::know))
        return false;
      const Coalition& c = rhs.sub().coalition();
      return !c.empty() && f.left().coalition().subset_of(c) &&
             rhs.sub().sub() == f.left().sub();
    }

    case Axiom::unachievability_of_falsehood:
      return is_op(f, Op::negation) && is_op(f.sub(), Op::how) &&
             is_op(f.sub().sub(), Op::falsum);
  }
  return false;
}

// ---------------------------------------------------------------- Tautology

class Propositional {
 public:
  explicit Propositional(const Formula& f) { collect(f); }

  std::size_t num_vars() const { return vars_.size(); }

  bool eval(const Formula& f, std::uint64_t assignment) const {
    switch (f.op()) {
      case Op::falsum:
        return false;
      case Op::negation:
        return !eval(f.sub(), assignment);
      case Op::implication:
        return !eval(f.left(), assignment) || eval(f.right(), assignment);
      default:
        return assignment >> vars_.at(f) & 1;
    }
  }

 private:
  void collect(const Formula& f) {
    switch (f.op()) {
      case Op::falsum:
        return;
      case Op::negation:
        collect(f.sub());
        return;
      case Op::implication:
        collect(f.left());
        collect(f.right());
        return;
      default:
        vars_.emplace(f, vars_.size());
    }
  }

  std::unordered_map<Formula, std::size_t> vars_;
};

std::string describe(const Justification& j, const Derivation& d) {
  auto label = [&](std::size_t i) {
    if (i < d.lines.size() && !d.lines[i].label.empty()) return d.lines[i].label;
    return std::to_string(i + 1);
  };
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, just::Tautology>) return "taut";
        if constexpr (std::is_same_v<T, just::AxiomInstance>)
          return "axiom " + std::string(axiom_name(x.axiom));
        if constexpr (std::is_same_v<T, just::ModusPonens>)
          return "mp " + label(x.minor) + " " + label(x.major);
        if constexpr (std::is_same_v<T, just::Necessitation>)
          return "nec" + x.coalition.to_string() + " " + label(x.line);
        if constexpr (std::is_same_v<T, just::StrategicNecessitation>)
          return "snec" + x.coalition.to_string() + " " + label(x.line);
        if constexpr (std::is_same_v<T, just::Hypothesis>) {
          if (x.index < d.hypothesis_labels.size())
            return "hyp " + d.hypothesis_labels[x.index];
          return "hyp " + std::to_string(x.index + 1);
        }
      },
      j);
}

}  // namespace

std::string_view axiom_name(Axiom a) {
  for (const auto& [axiom, name] : kNames)
    if (axiom == a) return name;
  return "?";
}

std::optional<Axiom> axiom_from_name(std::string_view name) {
  for (const auto& [axiom, n] : kNames)
    if (n == name) return axiom;
  return std::nullopt;
}

bool is_instance(const Formula& f, Axiom a) { return match(f, a); }

std::vector<Axiom> match_axiom(const Formula& f) {
  std::vector<Axiom> out;
  for (Axiom a : kAllAxioms)
    if (match(f, a)) out.push_back(a);
  return out;
}

bool is_tautology(const Formula& f) {
  Propositional p(f);
  if (p.num_vars() > 30)
    throw std::invalid_argument("too many propositional variables for a "
                                "truth-table check");
  const std::uint64_t rows = std::uint64_t{1} << p.num_vars();
  for (std::uint64_t a = 0; a < rows; ++a)
    if (!p.eval(f, a)) return false;
  return true;
}

// ------------------------------------------------------------------- Verify

std::string_view failure_name(Failure f) {
  switch (f) {
    case Failure::none:
      return "none";
    case Failure::empty:
      return "empty derivation";
    case Failure::bad_index:
      return "bad index";
    case Failure::formula_mismatch:
      return "formula mismatch";
    case Failure::not_a_tautology:
      return "not a tautology";
    case Failure::schema_mismatch:
      return "schema mismatch";
    case Failure::mode_violation:
      return "mode violation";
    case Failure::goal_mismatch:
      return "goal mismatch";
  }
  return "?";
}

std::string VerifyReport::text(const Derivation& d) const {
  std::ostringstream os;
  if (ok) {
    os << "ok: " << print(d.lines.back().formula)
       << (theorem ? " (theorem)" : " (from hypotheses)");
    return os.str();
  }
  os << "error";
  if (line) {
    os << " at line " << (*line + 1);
    if (!d.lines[*line].label.empty() &&
        d.lines[*line].label != std::to_string(*line + 1))
      os << " [" << d.lines[*line].label << "]";
  }
  os << ": " << failure_name(failure) << ": " << reason;
  return os.str();
}

VerifyReport verify(const Derivation& d) {
  VerifyReport report;
  std::vector<bool> theorem(d.lines.size(), false);

  auto fail = [&](std::size_t i, Failure f, std::string reason) {
    report.ok = false;
    report.failure = f;
    report.line = i;
    report.reason = std::move(reason);
    return report;
  };

  for (std::size_t i = 0; i < d.lines.size(); ++i) {
    const Formula& f = d.lines[i].formula;
    const Justification& j = d.lines[i].justification;
    auto earlier = [&](std::size_t k) { return k < i; };

    if (std::holds_alternative<just::Tautology>(j)) {
      if (!is_tautology(f))
        return fail(i, Failure::not_a_tautology,
                    print(f) + " is not a propositional tautology");
      theorem[i] = true;
    } else if (auto* ax = std::get_if<just::AxiomInstance>(&j)) {
      if (!is_instance(f, ax->axiom))
        return fail(i, Failure::schema_mismatch,
                    print(f) + " is not an instance of " +
                        std::string(axiom_name(ax->axiom)));
      theorem[i] = true;
    } else if (auto* mp = std::get_if<just::ModusPonens>(&j)) {
      if (!earlier(mp->minor) || !earlier(mp->major))
        return fail(i, Failure::bad_index,
                    describe(j, d) + " must cite earlier lines");
      const Formula expected =
          Formula::implies(d.lines[mp->minor].formula, f);
      if (!(d.lines[mp->major].formula == expected))
        return fail(i, Failure::formula_mismatch,
                    "modus ponens needs " + print(expected) + " at the major "
                    "premise");
      theorem[i] = theorem[mp->minor] && theorem[mp->major];
    } else if (auto* nec = std::get_if<just::Necessitation>(&j)) {
      if (!earlier(nec->line))
        return fail(i, Failure::bad_index,
                    describe(j, d) + " must cite an earlier line");
      const Formula expected =
          Formula::know(nec->coalition, d.lines[nec->line].formula);
      if (!(f == expected))
        return fail(i, Failure::formula_mismatch,
                    "necessitation yields " + print(expected));
      if (!theorem[nec->line])
        return fail(i, Failure::mode_violation,
                    "necessitation applied to a line that depends on "
                    "hypotheses");
      theorem[i] = true;
    } else if (auto* snec = std::get_if<just::StrategicNecessitation>(&j)) {
      if (!earlier(snec->line))
        return fail(i, Failure::bad_index,
                    describe(j, d) + " must cite an earlier line");
      const Formula expected =
          Formula::how(snec->coalition, d.lines[snec->line].formula);
      if (!(f == expected))
        return fail(i, Failure::formula_mismatch,
                    "strategic necessitation yields " + print(expected));
      if (!theorem[snec->line])
        return fail(i, Failure::mode_violation,
                    "strategic necessitation applied to a line that depends "
                    "on hypotheses");
      theorem[i] = true;
    } else if (auto* hyp = std::get_if<just::Hypothesis>(&j)) {
      if (hyp->index >= d.hypotheses.size())
        return fail(i, Failure::bad_index, "no such hypothesis");
      if (!(f == d.hypotheses[hyp->index]))
        return fail(i, Failure::formula_mismatch,
                    "hypothesis is " + print(d.hypotheses[hyp->index]));
      theorem[i] = false;
    }
  }

  if (d.lines.empty()) {
    report.failure = Failure::empty;
    report.reason = "derivation has no lines";
    return report;
  }
  if (d.goal && !(d.lines.back().formula == *d.goal)) {
    report.failure = Failure::goal_mismatch;
    report.reason = "final line is " + print(d.lines.back().formula) +
                    ", goal is " + print(*d.goal);
    return report;
  }
  report.ok = true;
  report.theorem = theorem.back();
  return report;
}

// --------------------------------------------------------- Superdistribution

Formula implication_chain(std::span<const Formula> premises,
                          const Formula& conclusion) {
  Formula out = conclusion;
  for (std::size_t i = premises.size(); i-- > 0;)
    out = Formula::implies(premises[i], out);
  return out;
}

namespace {

Derivation start_from_core(std::span<const Formula> premises,
                           const Formula& conclusion, const Derivation& core) {
  if (premises.empty())
    throw DerivationError("superdistributivity needs at least one premise");
  VerifyReport r = verify(core);
  if (!r.ok)
    throw DerivationError("propositional core does not verify: " + r.text(core));
  if (!r.theorem)
    throw DerivationError("propositional core must not use hypotheses");
  const Formula chain = implication_chain(premises, conclusion);
  if (!(core.lines.back().formula == chain))
    throw DerivationError("propositional core proves " +
                          print(core.lines.back().formula) + ", expected " +
                          print(chain));
  Derivation d;
  for (const auto& line : core.lines)
    d.lines.push_back({line.formula, line.justification, {}});
  return d;
}

// Peels premises off the chain held at `line` under modality `make`, one
// premise at a time: axiom instance, mp, hypothesis, mp.
template <typename Make, typename Coalitions>
void peel(Derivation& d, std::size_t line, std::span<const Formula> premises,
          const Formula& conclusion, Coalitions coalition_of, Make make,
          Axiom axiom) {
  Coalition acc = coalition_of(std::size_t(-1));
  for (std::size_t k = 0; k < premises.size(); ++k) {
    const Formula rest =
        implication_chain(premises.subspan(k + 1), conclusion);
    const Coalition ck = coalition_of(k);
    const Coalition next = acc.united(ck);
    const Formula held = make(acc, Formula::implies(premises[k], rest));
    const Formula step = Formula::implies(make(ck, premises[k]), make(next, rest));
    d.lines.push_back({Formula::implies(held, step), just::AxiomInstance{axiom}, {}});
    d.lines.push_back({step, just::ModusPonens{line, d.lines.size() - 1}, {}});
    const std::size_t step_line = d.lines.size() - 1;
    d.hypotheses.push_back(make(ck, premises[k]));
    d.lines.push_back({d.hypotheses.back(), just::Hypothesis{k}, {}});
    d.lines.push_back(
        {make(next, rest), just::ModusPonens{d.lines.size() - 1, step_line}, {}});
    line = d.lines.size() - 1;
    acc = next;
  }
  d.goal = d.lines.back().formula;
}

}  // namespace

Derivation derive_superdistributivity_instance(
    std::span<const Coalition> premise_coalitions,
    std::span<const Formula> premise_formulas, const Formula& conclusion,
    const Derivation& propositional_core) {
  if (premise_coalitions.size() != premise_formulas.size())
    throw DerivationError("one coalition per premise is required");
  for (std::size_t i = 0; i < premise_coalitions.size(); ++i)
    for (std::size_t j = i + 1; j < premise_coalitions.size(); ++j)
      if (!premise_coalitions[i].disjoint_from(premise_coalitions[j]))
        throw DerivationError("coalitions " + premise_coalitions[i].to_string() +
                              " and " + premise_coalitions[j].to_string() +
                              " are not disjoint");
  Derivation d =
      start_from_core(premise_formulas, conclusion, propositional_core);
  const std::size_t core_line = d.lines.size() - 1;
  d.lines.push_back({Formula::how(Coalition(), d.lines[core_line].formula),
                     just::StrategicNecessitation{core_line, Coalition()},
                     {}});
  peel(
      d, d.lines.size() - 1, premise_formulas, conclusion,
      [&](std::size_t k) {
        return k == std::size_t(-1) ? Coalition() : premise_coalitions[k];
      },
      [](const Coalition& c, Formula f) { return Formula::how(c, std::move(f)); },
      Axiom::cooperation);
  return d;
}

Derivation derive_knowledge_superdistributivity_instance(
    const Coalition& coalition, std::span<const Formula> premise_formulas,
    const Formula& conclusion, const Derivation& propositional_core) {
  Derivation d =
      start_from_core(premise_formulas, conclusion, propositional_core);
  const std::size_t core_line = d.lines.size() - 1;
  d.lines.push_back({Formula::know(coalition, d.lines[core_line].formula),
                     just::Necessitation{core_line, coalition},
                     {}});
  peel(
      d, d.lines.size() - 1, premise_formulas, conclusion,
      [&](std::size_t) { return coalition; },
      [](const Coalition& c, Formula f) { return Formula::know(c, std::move(f)); },
      Axiom::distributivity);
  return d;
}

}  // namespace knowhow
