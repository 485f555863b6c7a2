#include "ltlnav/automaton.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace ltlnav {

using ltl::Op;

StateExplosion::StateExplosion(std::size_t cap)
    : std::runtime_error("automaton exceeds the state cap of " + std::to_string(cap) + " states") {}

namespace {

bool is_literal_pair(const Formula& a, const Formula& b) {
  return a.op() == Op::Not && a.lhs().op() == Op::Atom && b.op() == Op::Atom && a.lhs().name() == b.name();
}

bool has_complementary_literals(const std::vector<Formula>& sorted) {
  for (const Formula& f : sorted) {
    if (f.op() != Op::Not) continue;
    for (const Formula& g : sorted) {
      if (is_literal_pair(f, g)) return true;
    }
  }
  return false;
}

void flatten(Op op, const Formula& f, std::vector<Formula>& out) {
  if (f.op() == op) {
    flatten(op, f.lhs(), out);
    flatten(op, f.rhs(), out);
  } else {
    out.push_back(f);
  }
}

Formula rebuild(Op op, std::vector<Formula>& operands) {
  std::sort(operands.begin(), operands.end());
  operands.erase(std::unique(operands.begin(), operands.end()), operands.end());
  Formula out = operands.back();
  for (std::size_t i = operands.size() - 1; i-- > 0;) out = ltl::make_binary(op, operands[i], out);
  return out;
}

const Formula& nonempty() {
  static const Formula f = ltl::make_eventually(ltl::make_true());
  return f;
}

const Formula& empty_word() {
  static const Formula f = ltl::make_always(ltl::make_false());
  return f;
}

// Operands are assumed normalized.
Formula smart_and(const Formula& a, const Formula& b) {
  std::vector<Formula> ops;
  flatten(Op::And, a, ops);
  flatten(Op::And, b, ops);
  std::vector<Formula> kept;
  for (const Formula& f : ops) {
    if (f.op() == Op::False) return ltl::make_false();
    if (f.op() != Op::True) kept.push_back(f);
  }
  if (kept.empty()) return ltl::make_true();
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  if (has_complementary_literals(kept)) return ltl::make_false();
  // x & F true == x whenever x already fails on the empty word.
  if (kept.size() > 1) {
    auto it = std::find(kept.begin(), kept.end(), nonempty());
    if (it != kept.end()) {
      const bool redundant = std::any_of(kept.begin(), kept.end(), [&](const Formula& g) {
        return !(g == nonempty()) && !ltl::holds_on_empty(g);
      });
      if (redundant) kept.erase(it);
    }
  }
  return rebuild(Op::And, kept);
}

Formula smart_or(const Formula& a, const Formula& b) {
  std::vector<Formula> ops;
  flatten(Op::Or, a, ops);
  flatten(Op::Or, b, ops);
  std::vector<Formula> kept;
  for (const Formula& f : ops) {
    if (f.op() == Op::True) return ltl::make_true();
    if (f.op() != Op::False) kept.push_back(f);
  }
  if (kept.empty()) return ltl::make_false();
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  if (has_complementary_literals(kept)) return ltl::make_true();
  // x | G false == x whenever x already holds on the empty word.
  if (kept.size() > 1) {
    auto it = std::find(kept.begin(), kept.end(), empty_word());
    if (it != kept.end()) {
      const bool redundant = std::any_of(kept.begin(), kept.end(), [&](const Formula& g) {
        return !(g == empty_word()) && ltl::holds_on_empty(g);
      });
      if (redundant) kept.erase(it);
    }
  }
  return rebuild(Op::Or, kept);
}

Formula normalize_impl(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return f;
    case Op::Not: {
      Formula a = normalize_impl(f.lhs());
      if (a.op() == Op::True) return ltl::make_false();
      if (a.op() == Op::False) return ltl::make_true();
      return ltl::make_not(a);
    }
    case Op::And:
      return smart_and(normalize_impl(f.lhs()), normalize_impl(f.rhs()));
    case Op::Or:
      return smart_or(normalize_impl(f.lhs()), normalize_impl(f.rhs()));
    case Op::Imply:
      return normalize_impl(ltl::nnf(f));
    case Op::Next: {
      Formula a = normalize_impl(f.lhs());
      if (a.op() == Op::False) return a;
      return ltl::make_next(a);
    }
    case Op::WeakNext: {
      Formula a = normalize_impl(f.lhs());
      if (a.op() == Op::True) return a;
      return ltl::make_weak_next(a);
    }
    case Op::Eventually: {
      Formula a = normalize_impl(f.lhs());
      if (a.op() == Op::False) return a;
      return ltl::make_eventually(a);
    }
    case Op::Always: {
      Formula a = normalize_impl(f.lhs());
      if (a.op() == Op::True) return a;
      return ltl::make_always(a);
    }
    case Op::Until: {
      Formula a = normalize_impl(f.lhs());
      Formula b = normalize_impl(f.rhs());
      if (b.op() == Op::False) return b;
      if (a.op() == Op::False) return smart_and(b, nonempty());
      return ltl::make_until(a, b);
    }
    case Op::Release: {
      Formula a = normalize_impl(f.lhs());
      Formula b = normalize_impl(f.rhs());
      if (b.op() == Op::True) return b;
      if (a.op() == Op::True) return smart_or(b, empty_word());
      return ltl::make_release(a, b);
    }
  }
  return f;
}

Formula raw_and(const Formula& a, const Formula& b) {
  if (a.op() == Op::False || b.op() == Op::False) return ltl::make_false();
  if (a.op() == Op::True) return b;
  if (b.op() == Op::True) return a;
  return ltl::make_and(a, b);
}

Formula raw_or(const Formula& a, const Formula& b) {
  if (a.op() == Op::True || b.op() == Op::True) return ltl::make_true();
  if (a.op() == Op::False) return b;
  if (b.op() == Op::False) return a;
  return ltl::make_or(a, b);
}

Formula progress_impl(const Formula& f, const Letter& letter) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Atom:
      return letter.count(f.name()) ? ltl::make_true() : ltl::make_false();
    case Op::Not:
      if (f.lhs().op() != Op::Atom) throw std::invalid_argument("progress() requires a formula in negation normal form");
      return letter.count(f.lhs().name()) ? ltl::make_false() : ltl::make_true();
    case Op::And:
      return raw_and(progress_impl(f.lhs(), letter), progress_impl(f.rhs(), letter));
    case Op::Or:
      return raw_or(progress_impl(f.lhs(), letter), progress_impl(f.rhs(), letter));
    case Op::Imply:
      throw std::invalid_argument("progress() requires a formula in negation normal form");
    case Op::Next:
      // Strong next: the remainder must be non-empty.
      return raw_and(f.lhs(), nonempty());
    case Op::WeakNext:
      return raw_or(f.lhs(), empty_word());
    case Op::Eventually:
      return raw_or(progress_impl(f.lhs(), letter), f);
    case Op::Always:
      return raw_and(progress_impl(f.lhs(), letter), f);
    case Op::Until:
      return raw_or(progress_impl(f.rhs(), letter), raw_and(progress_impl(f.lhs(), letter), f));
    case Op::Release:
      return raw_and(progress_impl(f.rhs(), letter), raw_or(progress_impl(f.lhs(), letter), f));
  }
  return f;
}

// Residual formulas are kept as a disjunction of conjunctions ("cubes") of
// elements: atoms, negated atoms, temporal subformulas of the task, F true
// and G false. Cubes are sorted sets, subsumed cubes are dropped, so each
// residual has one representation and the state space is finite.
using Cube = std::vector<Formula>;
using Dnf = std::vector<Cube>;

bool simplify_cube(Cube& c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  if (has_complementary_literals(c)) return false;
  const bool has_empty = std::find(c.begin(), c.end(), empty_word()) != c.end();
  bool any_fails_on_empty = false;
  for (const Formula& g : c) {
    if (!(g == empty_word()) && !(g == nonempty()) && !ltl::holds_on_empty(g)) any_fails_on_empty = true;
  }
  if (has_empty) {
    // G false pins the word to be empty; every other element must hold there.
    if (any_fails_on_empty || std::find(c.begin(), c.end(), nonempty()) != c.end()) return false;
    c = {empty_word()};
    return true;
  }
  if (any_fails_on_empty) {
    auto it = std::find(c.begin(), c.end(), nonempty());
    if (it != c.end()) c.erase(it);
  }
  return true;
}

void canonicalize(Dnf& d) {
  Dnf kept;
  for (Cube& c : d) {
    if (simplify_cube(c)) kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  Dnf out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = 0; j < kept.size() && !subsumed; ++j) {
      if (i != j && kept[j].size() < kept[i].size() &&
          std::includes(kept[i].begin(), kept[i].end(), kept[j].begin(), kept[j].end())) {
        subsumed = true;
      }
    }
    if (!subsumed) out.push_back(kept[i]);
  }
  // {G false} is implied by any other cube that holds on the empty word.
  auto lone = std::find(out.begin(), out.end(), Cube{empty_word()});
  if (lone != out.end()) {
    const bool implied = std::any_of(out.begin(), out.end(), [&](const Cube& c) {
      return !(c == Cube{empty_word()}) &&
             std::all_of(c.begin(), c.end(), [](const Formula& g) { return ltl::holds_on_empty(g); });
    });
    if (implied) out.erase(lone);
  }
  d = std::move(out);
}

Dnf to_dnf(const Formula& f) {
  switch (f.op()) {
    case Op::True:
      return {Cube{}};
    case Op::False:
      return {};
    case Op::Or: {
      Dnf a = to_dnf(f.lhs());
      Dnf b = to_dnf(f.rhs());
      a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
      canonicalize(a);
      return a;
    }
    case Op::And: {
      const Dnf a = to_dnf(f.lhs());
      const Dnf b = to_dnf(f.rhs());
      Dnf out;
      out.reserve(a.size() * b.size());
      for (const Cube& x : a) {
        for (const Cube& y : b) {
          Cube c = x;
          c.insert(c.end(), y.begin(), y.end());
          out.push_back(std::move(c));
        }
      }
      canonicalize(out);
      return out;
    }
    default:
      return {Cube{f}};
  }
}

Formula from_dnf(const Dnf& d) {
  if (d.empty()) return ltl::make_false();
  std::vector<Formula> terms;
  for (const Cube& c : d) {
    if (c.empty()) return ltl::make_true();
    Formula t = c.back();
    for (std::size_t i = c.size() - 1; i-- > 0;) t = ltl::make_and(c[i], t);
    terms.push_back(t);
  }
  Formula out = terms.back();
  for (std::size_t i = terms.size() - 1; i-- > 0;) out = ltl::make_or(terms[i], out);
  return out;
}

Formula canonical(const Formula& f) { return from_dnf(to_dnf(f)); }

std::string letter_key(const Letter& l) {
  std::string key;
  for (const auto& p : l) {
    key += p;
    key += '\x1f';
  }
  return key;
}

Letter project_onto(const Letter& l, const std::vector<std::string>& props) {
  Letter out;
  for (const auto& p : l) {
    if (std::binary_search(props.begin(), props.end(), p)) out.insert(p);
  }
  return out;
}

std::string letter_text(const Letter& l) {
  std::string s = "{";
  bool first = true;
  for (const auto& p : l) {
    if (!first) s += ",";
    s += p;
    first = false;
  }
  return s + "}";
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

Formula normalize(const Formula& f) { return canonical(normalize_impl(ltl::nnf(f))); }

Formula progress(const Formula& f, const Letter& letter) { return canonical(progress_impl(f, letter)); }

// ---------------------------------------------------------------------------

Letter TaskAutomaton::project(const Letter& l) const { return project_onto(l, props_); }

bool TaskAutomaton::has_letter(const Letter& l) const { return letter_index_.count(project(l)) != 0; }

LetterId TaskAutomaton::letter_id(const Letter& l) const {
  auto it = letter_index_.find(project(l));
  if (it == letter_index_.end()) throw std::out_of_range("letter " + letter_text(l) + " is outside the automaton alphabet");
  return it->second;
}

// ---------------------------------------------------------------------------

AutomatonBuilder::AutomatonBuilder(const Formula& f, std::size_t max_states)
    : max_states_(max_states), props_(ltl::atomic_props(f)) {
  intern(normalize(f));
}

StateId AutomatonBuilder::intern(const Formula& f) {
  if (auto it = index_.find(f); it != index_.end()) return it->second;
  if (formulas_.size() >= max_states_) throw StateExplosion(max_states_);
  const auto id = static_cast<StateId>(formulas_.size());
  formulas_.push_back(f);
  index_.emplace(f, id);
  return id;
}

bool AutomatonBuilder::is_accepting(StateId q) const { return ltl::holds_on_empty(formulas_[q]); }

StateId AutomatonBuilder::next(StateId q, const Letter& letter) {
  Letter projected = project_onto(letter, props_);
  auto key = std::make_pair(q, letter_key(projected));
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  // Copy: intern() may reallocate formulas_.
  const Formula current = formulas_[q];
  const StateId target = intern(progress(current, projected));
  memo_.emplace(std::move(key), target);
  return target;
}

TaskAutomaton AutomatonBuilder::freeze(const std::vector<Letter>& letters) {
  TaskAutomaton a;
  a.props_ = props_;
  auto add_letter = [&](const Letter& l) {
    Letter projected = project_onto(l, props_);
    if (a.letter_index_.count(projected)) return;
    a.letter_index_.emplace(projected, static_cast<LetterId>(a.letters_.size()));
    a.letters_.push_back(std::move(projected));
  };
  for (const Letter& l : letters) add_letter(l);
  add_letter(Letter{});

  std::vector<std::vector<StateId>> rows;
  for (StateId q = 0; q < formulas_.size(); ++q) {
    std::vector<StateId> row;
    row.reserve(a.letters_.size());
    for (const Letter& l : a.letters_) row.push_back(next(q, l));
    rows.push_back(std::move(row));
  }
  a.formulas_ = formulas_;
  a.table_.reserve(rows.size() * a.letters_.size());
  for (const auto& row : rows) a.table_.insert(a.table_.end(), row.begin(), row.end());
  a.accepting_.reserve(a.formulas_.size());
  for (const Formula& f : a.formulas_) a.accepting_.push_back(ltl::holds_on_empty(f) ? 1 : 0);
  return a;
}

std::vector<Letter> all_letters(const std::vector<std::string>& props) {
  if (props.size() > 20) throw std::invalid_argument("too many propositions to enumerate every letter");
  std::vector<Letter> out;
  const std::size_t n = std::size_t{1} << props.size();
  out.reserve(n);
  for (std::size_t mask = 0; mask < n; ++mask) {
    Letter l;
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (mask & (std::size_t{1} << i)) l.insert(props[i]);
    }
    out.push_back(std::move(l));
  }
  return out;
}

TaskAutomaton compile(const Formula& f, const std::vector<Letter>& letters, std::size_t max_states) {
  AutomatonBuilder builder(f, max_states);
  std::vector<Letter> declared;
  declared.reserve(letters.size() + 1);
  declared.emplace_back();
  declared.insert(declared.end(), letters.begin(), letters.end());
  return builder.freeze(declared);
}

TaskAutomaton compile(const Formula& f, std::size_t max_states) {
  AutomatonBuilder builder(f, max_states);
  return builder.freeze(all_letters(builder.propositions()));
}

bool accepts(const TaskAutomaton& a, const Word& w) {
  StateId q = TaskAutomaton::kInitial;
  for (const Letter& l : w) q = a.step(q, l);
  return a.is_accepting(q);
}

bool accepts(const TaskAutomaton& a, std::span<const LetterId> w) {
  StateId q = TaskAutomaton::kInitial;
  for (LetterId l : w) q = a.step(q, l);
  return a.is_accepting(q);
}

std::string to_dot(const TaskAutomaton& a) {
  std::ostringstream out;
  out << "digraph automaton {\n  rankdir=LR;\n  init [shape=point];\n  init -> 0;\n";
  for (StateId q = 0; q < a.num_states(); ++q) {
    out << "  " << q << " [shape=" << (a.is_accepting(q) ? "doublecircle" : "circle") << ", label=\"" << q << "\\n"
        << dot_escape(ltl::to_infix(a.state_formula(q))) << "\"];\n";
  }
  for (StateId q = 0; q < a.num_states(); ++q) {
    std::map<StateId, std::vector<std::string>> guards;
    for (LetterId l = 0; l < a.num_letters(); ++l) guards[a.step(q, l)].push_back(letter_text(a.letter(l)));
    for (const auto& [target, labels] : guards) {
      std::string label;
      for (const auto& s : labels) {
        if (!label.empty()) label += "\\n";
        label += s;
      }
      out << "  " << q << " -> " << target << " [label=\"" << dot_escape(label) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace ltlnav
