#ifndef KNOWHOW_FORMULA_HPP
#define KNOWHOW_FORMULA_HPP

#include <cstddef>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace knowhow {

/// True if `name` is a legal agent, state, or proposition token: letters,
/// digits, underscore and apostrophe, starting with a letter or underscore.
bool is_identifier(std::string_view name);

/// A finite set of agent names, kept sorted and duplicate-free.
class Coalition {
 public:
  Coalition() = default;
  /// Throws std::invalid_argument on duplicates or malformed names.
  explicit Coalition(std::vector<std::string> members);
  Coalition(std::initializer_list<std::string> members)
      : Coalition(std::vector<std::string>(members)) {}

  const std::vector<std::string>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }
  bool contains(std::string_view agent) const;

  bool subset_of(const Coalition& other) const;
  bool disjoint_from(const Coalition& other) const;
  Coalition united(const Coalition& other) const;
  Coalition minus(const Coalition& other) const;

  bool operator==(const Coalition&) const = default;
  auto operator<=>(const Coalition&) const = default;

  /// "{a,b}"
  std::string to_string() const;

 private:
  std::vector<std::string> members_;
};

enum class Op { falsum, atom, negation, implication, know, how };

/// Immutable formula of the language with atoms, falsum, negation,
/// implication, distributed knowledge K_C and know-how H_C. Subtrees are
/// shared; equality is structural.
class Formula {
 public:
  static Formula falsum();
  static Formula truth();  // !false
  static Formula atom(std::string name);
  static Formula negation(Formula sub);
  static Formula implies(Formula left, Formula right);
  static Formula know(Coalition coalition, Formula sub);
  static Formula how(Coalition coalition, Formula sub);

  Op op() const;
  /// Proposition name; only for atoms.
  const std::string& name() const;
  /// Only for know/how.
  const Coalition& coalition() const;
  /// Operand of negation, know, how.
  const Formula& sub() const;
  const Formula& left() const;
  const Formula& right() const;

  bool is(Op o) const { return op() == o; }
  std::size_t hash() const;
  std::size_t size() const;

  bool operator==(const Formula& other) const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  static Formula make(Op op, std::string name, Coalition coalition,
                      std::vector<Formula> children);
  std::shared_ptr<const Node> node_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected,
             const std::string& found);
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Parses the whole of `text`. Throws ParseError.
Formula parse(std::string_view text);

/// Parses the longest formula starting at `pos` and advances `pos` past it
/// (and past trailing whitespace). Used by file formats that put more tokens
/// after a formula.
Formula parse_prefix(std::string_view text, std::size_t& pos);

/// Canonical text with minimal parentheses; parse(print(f)) == f.
std::string print(const Formula& f);

/// Maximum number of nested H operators along any path.
std::size_t h_depth(const Formula& f);

/// Maximum number of nested modal (K or H) operators along any path.
std::size_t modal_depth(const Formula& f);

bool uses_empty_coalition(const Formula& f);

inline std::ostream& operator<<(std::ostream& os, const Formula& f) {
  return os << print(f);
}

}  // namespace knowhow

template <>
struct std::hash<knowhow::Formula> {
  std::size_t operator()(const knowhow::Formula& f) const noexcept {
    return f.hash();
  }
};

#endif  // KNOWHOW_FORMULA_HPP
