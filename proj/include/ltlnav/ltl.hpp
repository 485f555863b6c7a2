#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ltlnav::ltl {

/// Operator tags. `WeakNext` and `Release` never appear in parsed user input
/// unless written explicitly; they are the duals produced by nnf().
enum class Op : std::uint8_t {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Imply,
  Next,
  WeakNext,
  Until,
  Release,
  Eventually,
  Always,
};

bool is_unary(Op op);
bool is_binary(Op op);

/// Immutable LTL formula. Copies share structure.
class Formula {
 public:
  Formula();  // true

  Op op() const;
  /// Proposition name; empty unless op() == Op::Atom.
  const std::string& name() const;
  /// Operand of a unary node, left operand of a binary node.
  const Formula& lhs() const;
  const Formula& rhs() const;

  std::size_t hash() const;
  /// Number of nodes.
  std::size_t size() const;

  /// Structural total order; 0 iff structurally equal.
  int compare(const Formula& other) const;
  bool operator==(const Formula& other) const { return compare(other) == 0; }
  bool operator<(const Formula& other) const { return compare(other) < 0; }

  /// Pointer identity of the shared node, usable as a memo key.
  const void* id() const { return node_.get(); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;

  friend Formula make_node(Op, std::string, Formula, Formula);
};

Formula make_true();
Formula make_false();
Formula make_atom(std::string name);
Formula make_not(Formula f);
Formula make_and(Formula a, Formula b);
Formula make_or(Formula a, Formula b);
Formula make_imply(Formula a, Formula b);
Formula make_next(Formula f);
Formula make_weak_next(Formula f);
Formula make_until(Formula a, Formula b);
Formula make_release(Formula a, Formula b);
Formula make_eventually(Formula f);
Formula make_always(Formula f);
Formula make_unary(Op op, Formula f);
Formula make_binary(Op op, Formula a, Formula b);

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Set of propositions true at one step.
using Letter = std::set<std::string>;
using Word = std::vector<Letter>;

/// Proposition names must be identifiers and must not collide with operator
/// keywords.
bool is_valid_proposition(std::string_view name);

class ParseError : public std::runtime_error {
 public:
  enum class Kind { UnexpectedToken, MissingOperand, TrailingInput, UnbalancedParens };
  ParseError(Kind kind, std::size_t position, const std::string& detail);
  Kind kind() const { return kind_; }
  /// Character offset of the offending token in the input text.
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

const char* to_string(ParseError::Kind kind);

/// Whitespace-separated prefix notation: `& | ! => X U F G` (plus `N`, `R`
/// for the nnf duals) and `true`/`false`.
Formula parse_prefix(std::string_view text);
/// Infix notation. Unary operators bind tightest, then U/R (left
/// associative), &, |, and => (right associative).
Formula parse_infix(std::string_view text);

std::string to_prefix(const Formula& f);
/// Fully parenthesized infix: `(a) & (b)`, `F(a)`.
std::string to_infix(const Formula& f);

enum class TextFormat { Prefix, Infix };
Formula parse(std::string_view text, TextFormat format);
std::string to_text(const Formula& f, TextFormat format);

/// Negation normal form. Imply is rewritten, negations are pushed to atoms,
/// and negated Next/Until/Always/Eventually become WeakNext/Release/Eventually/Always.
Formula nnf(const Formula& f);

/// True iff nnf(f) contains no Always and no Release.
bool is_syntactically_cosafe(const Formula& f);

/// Sorted, duplicate-free proposition names occurring in f.
std::vector<std::string> atomic_props(const Formula& f);

/// Replaces every proposition through `rename`; names it maps to an empty
/// string are left unchanged.
template <typename Fn>
Formula rename_props(const Formula& f, Fn&& rename);

/// Finite-trace satisfaction. Next is strong; the empty word satisfies
/// True, Always, Release, WeakNext and negated atoms.
bool eval_finite(const Formula& f, const Word& w);

/// eval_finite on the empty word; this is the acceptance condition of a
/// residual formula.
bool holds_on_empty(const Formula& f);

/// Reusable evaluator over words given as proposition bitmasks.
/// Bit i of a letter mask is set iff `props[i]` holds.
class FiniteEvaluator {
 public:
  FiniteEvaluator(const Formula& f, std::vector<std::string> props);
  explicit FiniteEvaluator(const Formula& f);

  const std::vector<std::string>& props() const { return props_; }
  bool operator()(std::span<const std::uint32_t> word) const;
  bool operator()(const Word& word) const;

 private:
  struct Step {
    Op op;
    int lhs = -1;
    int rhs = -1;
    int prop = -1;  // index into props_, -1 if the atom is not listed
  };
  std::vector<std::string> props_;
  std::vector<Step> steps_;  // postorder; last entry is the root
  mutable std::vector<std::uint8_t> scratch_;
};

// ---------------------------------------------------------------------------

template <typename Fn>
Formula rename_props(const Formula& f, Fn&& rename) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Atom: {
      std::string renamed = rename(f.name());
      return renamed.empty() ? f : make_atom(std::move(renamed));
    }
    default:
      break;
  }
  if (is_unary(f.op())) return make_unary(f.op(), rename_props(f.lhs(), rename));
  return make_binary(f.op(), rename_props(f.lhs(), rename), rename_props(f.rhs(), rename));
}

}  // namespace ltlnav::ltl
