#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltlnav/ltl.hpp"

namespace ltlnav {

using ltl::Formula;
using ltl::Letter;
using ltl::Word;

using StateId = std::uint32_t;
using LetterId = std::uint32_t;

class StateExplosion : public std::runtime_error {
 public:
  explicit StateExplosion(std::size_t cap);
};

/// One-letter progression of an NNF formula: for every word w,
/// `letter . w |= f` iff `w |= progress(f, letter)`. The result is in the
/// canonical form of normalize(), so equal residuals are equal formulas.
Formula progress(const Formula& f, const Letter& letter);

/// Canonical form used for automaton states: a disjunction of conjunctions
/// of literals and temporal subformulas, with subsumed conjunctions removed.
Formula normalize(const Formula& f);

/// Deterministic finite-trace automaton. State 0 is initial. A state accepts
/// iff its residual formula holds on the empty word.
///
/// The alphabet is the declared set of letters projected onto the
/// automaton's propositions; it always contains the empty letter.
class TaskAutomaton {
 public:
  static constexpr StateId kInitial = 0;

  const std::vector<std::string>& propositions() const { return props_; }
  std::size_t num_states() const { return formulas_.size(); }
  std::size_t num_letters() const { return letters_.size(); }

  bool is_accepting(StateId q) const { return accepting_[q] != 0; }
  const Formula& state_formula(StateId q) const { return formulas_[q]; }
  const Letter& letter(LetterId a) const { return letters_[a]; }

  /// Intersection of `l` with propositions().
  Letter project(const Letter& l) const;
  /// Id of project(l); throws std::out_of_range if the projected letter was
  /// not declared at compile time.
  LetterId letter_id(const Letter& l) const;
  bool has_letter(const Letter& l) const;

  StateId step(StateId q, LetterId a) const { return table_[static_cast<std::size_t>(q) * letters_.size() + a]; }
  StateId step(StateId q, const Letter& l) const { return step(q, letter_id(l)); }

 private:
  friend class AutomatonBuilder;

  std::vector<std::string> props_;
  std::vector<Letter> letters_;
  std::map<Letter, LetterId> letter_index_;
  std::vector<Formula> formulas_;
  std::vector<std::uint8_t> accepting_;
  std::vector<StateId> table_;  // row-major [state][letter]
};

/// Lazily discovers states by progression and memoizes transitions keyed by
/// (state, canonical letter). freeze() expands every reachable state over
/// the declared letters and yields an immutable TaskAutomaton.
class AutomatonBuilder {
 public:
  explicit AutomatonBuilder(const Formula& f, std::size_t max_states = 100000);

  const std::vector<std::string>& propositions() const { return props_; }
  std::size_t num_states() const { return formulas_.size(); }
  const Formula& state_formula(StateId q) const { return formulas_[q]; }
  bool is_accepting(StateId q) const;

  StateId next(StateId q, const Letter& letter);

  TaskAutomaton freeze(const std::vector<Letter>& letters);

 private:
  StateId intern(const Formula& f);

  std::size_t max_states_;
  std::vector<std::string> props_;
  std::vector<Formula> formulas_;
  std::unordered_map<Formula, StateId, ltl::FormulaHash> index_;
  std::map<std::pair<StateId, std::string>, StateId> memo_;
};

/// Compiles `f` over `letters` (projected onto atomic_props(f); the empty
/// letter is always added).
TaskAutomaton compile(const Formula& f, const std::vector<Letter>& letters, std::size_t max_states = 100000);

/// Compiles over every subset of atomic_props(f). Letter id k is the subset
/// whose bitmask over the sorted propositions is k.
TaskAutomaton compile(const Formula& f, std::size_t max_states = 100000);

/// All 2^n subsets of `props` in bitmask order.
std::vector<Letter> all_letters(const std::vector<std::string>& props);

bool accepts(const TaskAutomaton& a, const Word& w);
bool accepts(const TaskAutomaton& a, std::span<const LetterId> w);

/// DOT rendering: accepting states are double circles, edges carry the
/// letters that take them.
std::string to_dot(const TaskAutomaton& a);

}  // namespace ltlnav
