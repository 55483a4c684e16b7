#include "knowhow/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace knowhow {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

bool is_identifier(std::string_view name) {
  if (name.empty() || !ident_start(name.front())) return false;
  return std::all_of(name.begin(), name.end(), ident_char);
}

// ---------------------------------------------------------------- Coalition

Coalition::Coalition(std::vector<std::string> members)
    : members_(std::move(members)) {
  for (const auto& m : members_)
    if (!is_identifier(m))
      throw std::invalid_argument("malformed agent name '" + m + "'");
  std::sort(members_.begin(), members_.end());
  auto dup = std::adjacent_find(members_.begin(), members_.end());
  if (dup != members_.end())
    throw std::invalid_argument("duplicate agent '" + *dup + "' in coalition");
}

bool Coalition::contains(std::string_view agent) const {
  return std::binary_search(members_.begin(), members_.end(), agent);
}

bool Coalition::subset_of(const Coalition& other) const {
  return std::includes(other.members_.begin(), other.members_.end(),
                       members_.begin(), members_.end());
}

bool Coalition::disjoint_from(const Coalition& other) const {
  return std::none_of(members_.begin(), members_.end(),
                      [&](const std::string& m) { return other.contains(m); });
}

Coalition Coalition::united(const Coalition& other) const {
  std::vector<std::string> out;
  std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                 other.members_.end(), std::back_inserter(out));
  Coalition c;
  c.members_ = std::move(out);
  return c;
}

Coalition Coalition::minus(const Coalition& other) const {
  std::vector<std::string> out;
  std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                      other.members_.end(), std::back_inserter(out));
  Coalition c;
  c.members_ = std::move(out);
  return c;
}

std::string Coalition::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) s += ',';
    s += members_[i];
  }
  return s + "}";
}

// ------------------------------------------------------------------ Formula

struct Formula::Node {
  Op op;
  std::string name;
  Coalition coalition;
  std::vector<Formula> children;
  std::size_t hash = 0;
  std::size_t size = 1;
};

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

namespace {

std::size_t node_hash(Op op, const std::string& name, const Coalition& c,
                      const std::vector<Formula>& children) {
  std::size_t h = std::hash<int>{}(static_cast<int>(op));
  h = mix(h, std::hash<std::string>{}(name));
  for (const auto& m : c.members()) h = mix(h, std::hash<std::string>{}(m));
  h = mix(h, c.size());
  for (const auto& ch : children) h = mix(h, ch.hash());
  return h;
}

}  // namespace

Formula Formula::make(Op op, std::string name, Coalition coalition,
                      std::vector<Formula> children) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->name = std::move(name);
  n->coalition = std::move(coalition);
  n->children = std::move(children);
  n->hash = node_hash(n->op, n->name, n->coalition, n->children);
  for (const auto& ch : n->children) n->size += ch.size();
  return Formula(std::move(n));
}

Formula Formula::falsum() {
  static const Formula bottom = make(Op::falsum, {}, {}, {});
  return bottom;
}

Formula Formula::truth() { return negation(falsum()); }

Formula Formula::atom(std::string name) {
  if (!is_identifier(name) || name == "K" || name == "H" || name == "true" ||
      name == "false")
    throw std::invalid_argument("malformed proposition name '" + name + "'");
  return make(Op::atom, std::move(name), {}, {});
}

Formula Formula::negation(Formula sub) {
  return make(Op::negation, {}, {}, {std::move(sub)});
}

Formula Formula::implies(Formula left, Formula right) {
  return make(Op::implication, {}, {}, {std::move(left), std::move(right)});
}

Formula Formula::know(Coalition coalition, Formula sub) {
  return make(Op::know, {}, std::move(coalition), {std::move(sub)});
}

Formula Formula::how(Coalition coalition, Formula sub) {
  return make(Op::how, {}, std::move(coalition), {std::move(sub)});
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const {
  if (node_->op != Op::atom) throw std::logic_error("name() on a non-atom");
  return node_->name;
}
const Coalition& Formula::coalition() const {
  if (node_->op != Op::know && node_->op != Op::how)
    throw std::logic_error("coalition() on a non-modal formula");
  return node_->coalition;
}
const Formula& Formula::sub() const { return node_->children.at(0); }
const Formula& Formula::left() const { return node_->children.at(0); }
const Formula& Formula::right() const { return node_->children.at(1); }
std::size_t Formula::hash() const { return node_->hash; }
std::size_t Formula::size() const { return node_->size; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.hash != b.hash || a.op != b.op || a.size != b.size) return false;
  return a.name == b.name && a.coalition == b.coalition &&
         a.children == b.children;
}

// ------------------------------------------------------------------- Parser

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected,
                       const std::string& found)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "syntax error at offset " << offset << ": expected ";
        if (expected.size() > 1) os << "one of ";
        for (std::size_t i = 0; i < expected.size(); ++i)
          os << (i ? ", " : "") << expected[i];
        os << " but found " << found;
        return os.str();
      }()),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t pos) : text_(text), pos_(pos) {}

  Formula formula() {
    Formula left = unary();
    skip_space();
    if (lookahead("->")) {
      pos_ += 2;
      Formula right = formula();
      return Formula::implies(std::move(left), std::move(right));
    }
    return left;
  }

  std::size_t pos() {
    skip_space();
    return pos_;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    skip_space();
    std::string found = "end of input";
    if (pos_ < text_.size()) {
      std::size_t end = pos_;
      if (ident_char(text_[end]))
        while (end < text_.size() && ident_char(text_[end])) ++end;
      else
        end = pos_ + (lookahead("->") ? 2 : 1);
      found = "'" + std::string(text_.substr(pos_, end - pos_)) + "'";
    }
    throw ParseError(pos_, std::move(expected), found);
  }

 private:
  static inline const std::vector<std::string> kUnaryStart = {
      "'!'", "'K'", "'H'", "'('", "'false'", "'true'", "identifier"};

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool lookahead(std::string_view tok) const {
    return text_.substr(pos_, tok.size()) == tok;
  }

  std::string_view peek_ident() {
    skip_space();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) return {};
    std::size_t end = pos_;
    while (end < text_.size() && ident_char(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  void expect(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return;
    }
    fail({std::string("'") + c + "'"});
  }

  Coalition coalition() {
    expect('{');
    std::vector<std::string> members;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '}') {
      ++pos_;
      return Coalition();
    }
    while (true) {
      std::string_view name = peek_ident();
      if (name.empty()) fail({"agent name"});
      if (std::find(members.begin(), members.end(), name) != members.end())
        throw ParseError(pos_, {"distinct agent name"},
                         "duplicate agent '" + std::string(name) + "'");
      members.emplace_back(name);
      pos_ += name.size();
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (pos_ < text_.size() && text_[pos_] == '}') {
        ++pos_;
        break;
      }
      fail({"','", "'}'"});
    }
    return Coalition(std::move(members));
  }

  bool modality_ahead(std::string_view word) {
    std::size_t p = pos_ + word.size();
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p])))
      ++p;
    return p < text_.size() && text_[p] == '{';
  }

  Formula unary() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '!') {
      ++pos_;
      return Formula::negation(unary());
    }
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      Formula inner = formula();
      expect(')');
      return inner;
    }
    std::string_view word = peek_ident();
    if (word.empty()) fail(kUnaryStart);
    if (word == "K" || word == "H") {
      if (!modality_ahead(word)) {
        pos_ += word.size();
        fail({"'{'"});
      }
      pos_ += word.size();
      Coalition c = coalition();
      Formula body = unary();
      return word == "K" ? Formula::know(std::move(c), std::move(body))
                         : Formula::how(std::move(c), std::move(body));
    }
    pos_ += word.size();
    if (word == "false") return Formula::falsum();
    if (word == "true") return Formula::truth();
    return Formula::atom(std::string(word));
  }

  std::string_view text_;
  std::size_t pos_;
};

}  // namespace

Formula parse_prefix(std::string_view text, std::size_t& pos) {
  Parser p(text, pos);
  Formula f = p.formula();
  pos = p.pos();
  return f;
}

Formula parse(std::string_view text) {
  Parser p(text, 0);
  Formula f = p.formula();
  if (p.pos() != text.size()) p.fail({"'->'", "end of input"});
  return f;
}

// ------------------------------------------------------------------ Printer

namespace {

void print_to(std::string& out, const Formula& f);

void print_operand(std::string& out, const Formula& f) {
  if (f.is(Op::implication)) {
    out += '(';
    print_to(out, f);
    out += ')';
  } else {
    print_to(out, f);
  }
}

void print_to(std::string& out, const Formula& f) {
  switch (f.op()) {
    case Op::falsum:
      out += "false";
      return;
    case Op::atom:
      out += f.name();
      return;
    case Op::negation:
      if (f.sub().is(Op::falsum)) {
        out += "true";
        return;
      }
      out += '!';
      print_operand(out, f.sub());
      return;
    case Op::implication:
      print_operand(out, f.left());
      out += " -> ";
      print_to(out, f.right());
      return;
    case Op::know:
    case Op::how:
      out += f.is(Op::know) ? 'K' : 'H';
      out += f.coalition().to_string();
      if (!f.sub().is(Op::implication)) out += ' ';
      print_operand(out, f.sub());
      return;
  }
}

}  // namespace

std::string print(const Formula& f) {
  std::string out;
  print_to(out, f);
  return out;
}

// ---------------------------------------------------------------- Measures

std::size_t h_depth(const Formula& f) {
  switch (f.op()) {
    case Op::falsum:
    case Op::atom:
      return 0;
    case Op::negation:
    case Op::know:
      return h_depth(f.sub());
    case Op::how:
      return 1 + h_depth(f.sub());
    case Op::implication:
      return std::max(h_depth(f.left()), h_depth(f.right()));
  }
  return 0;
}

std::size_t modal_depth(const Formula& f) {
  switch (f.op()) {
    case Op::falsum:
    case Op::atom:
      return 0;
    case Op::negation:
      return modal_depth(f.sub());
    case Op::know:
    case Op::how:
      return 1 + modal_depth(f.sub());
    case Op::implication:
      return std::max(modal_depth(f.left()), modal_depth(f.right()));
  }
  return 0;
}

bool uses_empty_coalition(const Formula& f) {
  switch (f.op()) {
    case Op::falsum:
    case Op::atom:
      return false;
    case Op::negation:
      return uses_empty_coalition(f.sub());
    case Op::know:
    case Op::how:
      return f.coalition().empty() || uses_empty_coalition(f.sub());
    case Op::implication:
      return uses_empty_coalition(f.left()) || uses_empty_coalition(f.right());
  }
  return false;
}

}  // namespace knowhow
