#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "knowhow/proofkit.hpp"

namespace knowhow {

namespace {

constexpr std::size_t kUnresolved = std::numeric_limits<std::size_t>::max();

ProofFormatError format_error(const std::string& what, std::size_t line) {
  return ProofFormatError("line " + std::to_string(line) + ": " + what, line);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool done() {
    skip();
    return pos >= text.size();
  }
  std::string word() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '{')
      ++pos;
    if (start == pos) throw format_error("missing token", line);
    return std::string(text.substr(start, pos - start));
  }
  Coalition coalition() {
    skip();
    if (pos >= text.size() || text[pos] != '{')
      throw format_error("expected '{' after rule name", line);
    std::size_t close = text.find('}', pos);
    if (close == std::string_view::npos)
      throw format_error("unterminated coalition", line);
    std::string_view inner = trim(text.substr(pos + 1, close - pos - 1));
    pos = close + 1;
    std::vector<std::string> members;
    while (!inner.empty()) {
      auto comma = inner.find(',');
      members.emplace_back(trim(inner.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      inner = inner.substr(comma + 1);
    }
    try {
      return Coalition(std::move(members));
    } catch (const std::invalid_argument& e) {
      throw format_error(e.what(), line);
    }
  }
};

// Justification with label references still unresolved.
struct RawLine {
  std::string label;
  Formula formula;
  std::string rule;
  std::vector<std::string> refs;
  Coalition coalition;
  Axiom axiom = Axiom::truth;
  std::size_t line;
};

Formula parse_formula_at(std::string_view text, std::size_t& pos,
                         std::size_t line) {
  try {
    return parse_prefix(text, pos);
  } catch (const ParseError& e) {
    throw format_error(e.what(), line);
  }
}

}  // namespace

Derivation parse_proof(std::string_view text) {
  enum class Section { none, hypotheses, lines } section = Section::none;
  Derivation d;
  std::vector<RawLine> raw;
  std::map<std::string, std::size_t> hyp_index;
  std::map<std::string, std::size_t> line_index;

  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view full = text.substr(start, nl == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    std::string_view line = trim(full.substr(0, full.find('#')));
    if (line.empty()) continue;

    if (line == "hypotheses:") {
      section = Section::hypotheses;
      continue;
    }
    if (line == "lines:") {
      section = Section::lines;
      continue;
    }
    if (line.substr(0, 5) == "goal:") {
      if (d.goal) throw format_error("duplicate goal", lineno);
      std::string_view rest = line.substr(5);
      std::size_t pos = 0;
      Formula g = parse_formula_at(rest, pos, lineno);
      if (pos != rest.size())
        throw format_error("trailing text after goal", lineno);
      d.goal = g;
      section = Section::none;
      continue;
    }

    auto colon = line.find(':');
    if (colon == std::string_view::npos || section == Section::none)
      throw format_error("unexpected line '" + std::string(line) + "'",
                             lineno);
    std::string label(trim(line.substr(0, colon)));
    if (label.empty() || label.find_first_of(" \t") != std::string::npos)
      throw format_error("malformed label '" + label + "'", lineno);
    std::string_view body = line.substr(colon + 1);

    if (section == Section::hypotheses) {
      if (hyp_index.count(label))
        throw format_error("duplicate hypothesis label '" + label + "'",
                               lineno);
      std::size_t pos = 0;
      Formula f = parse_formula_at(body, pos, lineno);
      if (pos != body.size())
        throw format_error("trailing text after hypothesis", lineno);
      hyp_index[label] = d.hypotheses.size();
      d.hypotheses.push_back(f);
      d.hypothesis_labels.push_back(label);
      continue;
    }

    if (line_index.count(label))
      throw format_error("duplicate line label '" + label + "'", lineno);
    std::size_t pos = 0;
    Formula f = parse_formula_at(body, pos, lineno);
    Cursor cur{body, pos, lineno};
    if (cur.done())
      throw format_error("line has no justification", lineno);
    RawLine r{label, f, cur.word(), {}, {}, Axiom::truth, lineno};
    if (r.rule == "taut") {
    } else if (r.rule == "axiom") {
      std::string name = cur.word();
      auto a = axiom_from_name(name);
      if (!a) throw format_error("unknown axiom '" + name + "'", lineno);
      r.axiom = *a;
    } else if (r.rule == "mp") {
      r.refs.push_back(cur.word());
      r.refs.push_back(cur.word());
    } else if (r.rule == "nec" || r.rule == "snec") {
      r.coalition = cur.coalition();
      r.refs.push_back(cur.word());
    } else if (r.rule == "hyp") {
      r.refs.push_back(cur.word());
    } else {
      throw format_error("unknown rule '" + r.rule + "'", lineno);
    }
    if (!cur.done())
      throw format_error("trailing text after justification", lineno);
    line_index[label] = raw.size();
    raw.push_back(std::move(r));
  }

  auto line_ref = [&](const std::string& l) {
    auto it = line_index.find(l);
    return it == line_index.end() ? kUnresolved : it->second;
  };
  for (auto& r : raw) {
    Justification j = just::Tautology{};
    if (r.rule == "axiom") j = just::AxiomInstance{r.axiom};
    else if (r.rule == "mp")
      j = just::ModusPonens{line_ref(r.refs[0]), line_ref(r.refs[1])};
    else if (r.rule == "nec")
      j = just::Necessitation{line_ref(r.refs[0]), r.coalition};
    else if (r.rule == "snec")
      j = just::StrategicNecessitation{line_ref(r.refs[0]), r.coalition};
    else if (r.rule == "hyp") {
      auto it = hyp_index.find(r.refs[0]);
      j = just::Hypothesis{it == hyp_index.end() ? kUnresolved : it->second};
    }
    d.lines.push_back({r.formula, j, r.label});
  }
  if (!d.goal) throw format_error("missing 'goal:' line", lineno);
  return d;
}

Derivation load_proof_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read proof file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_proof(ss.str());
  } catch (const ProofFormatError& e) {
    throw ProofFormatError(path + ": " + e.what(), e.line());
  }
}

std::string print_proof(const Derivation& d) {
  auto line_label = [&](std::size_t i) -> std::string {
    if (i >= d.lines.size()) return "?";
    return d.lines[i].label.empty() ? std::to_string(i + 1) : d.lines[i].label;
  };
  auto hyp_label = [&](std::size_t i) {
    return i < d.hypothesis_labels.size() ? d.hypothesis_labels[i]
                                          : "h" + std::to_string(i + 1);
  };
  std::ostringstream os;
  if (!d.hypotheses.empty()) {
    os << "hypotheses:\n";
    for (std::size_t i = 0; i < d.hypotheses.size(); ++i)
      os << "  " << hyp_label(i) << ": " << print(d.hypotheses[i]) << '\n';
  }
  os << "lines:\n";
  std::size_t width = 0, label_width = 0;
  for (std::size_t i = 0; i < d.lines.size(); ++i) {
    width = std::max(width, print(d.lines[i].formula).size());
    label_width = std::max(label_width, line_label(i).size());
  }
  for (std::size_t i = 0; i < d.lines.size(); ++i) {
    std::string f = print(d.lines[i].formula);
    std::string l = line_label(i);
    os << "  " << l << ": " << std::string(label_width - l.size(), ' ') << f
       << std::string(width - f.size() + 2, ' ');
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, just::Tautology>) os << "taut";
          if constexpr (std::is_same_v<T, just::AxiomInstance>)
            os << "axiom " << axiom_name(x.axiom);
          if constexpr (std::is_same_v<T, just::ModusPonens>)
            os << "mp " << line_label(x.minor) << ' ' << line_label(x.major);
          if constexpr (std::is_same_v<T, just::Necessitation>)
            os << "nec" << x.coalition.to_string() << ' ' << line_label(x.line);
          if constexpr (std::is_same_v<T, just::StrategicNecessitation>)
            os << "snec" << x.coalition.to_string() << ' ' << line_label(x.line);
          if constexpr (std::is_same_v<T, just::Hypothesis>)
            os << "hyp " << hyp_label(x.index);
        },
        d.lines[i].justification);
    os << '\n';
  }
  if (d.goal) os << "goal: " << print(*d.goal) << '\n';
  return os.str();
}

}  // namespace knowhow
