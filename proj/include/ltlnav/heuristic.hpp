#pragma once

#include <limits>
#include <string>
#include <vector>

#include "ltlnav/automaton.hpp"
#include "ltlnav/semmap.hpp"

namespace ltlnav {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Automaton transitions indexed by label-set id instead of letter id.
class LabelTransitions {
 public:
  LabelTransitions(const TaskAutomaton& a, const LabelGrid& lg);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_sets() const { return num_sets_; }
  StateId operator()(StateId q, std::uint32_t set) const { return table_[q * num_sets_ + set]; }

 private:
  std::size_t num_states_;
  std::size_t num_sets_;
  std::vector<StateId> table_;
};

/// The distinct label sets of a LabelGrid with, for each set, the Euclidean
/// distance (meters) from every cell to the nearest cell carrying exactly
/// that set.
class LabelSetIndex {
 public:
  explicit LabelSetIndex(const LabelGrid& lg);

  std::size_t size() const { return sets_.size(); }
  const Letter& set(std::uint32_t id) const { return sets_[id]; }
  bool occurs(std::uint32_t id) const { return occurs_[id] != 0; }
  double distance(std::uint32_t id, std::size_t cell) const { return fields_[id][cell]; }
  /// Cells (row-major index) carrying the set.
  const std::vector<std::size_t>& cells(std::uint32_t id) const { return cells_[id]; }

 private:
  std::vector<Letter> sets_;
  std::vector<std::uint8_t> occurs_;
  std::vector<std::vector<double>> fields_;
  std::vector<std::vector<std::size_t>> cells_;
};

/// c_l: minimum Euclidean distance between any two cells carrying the two
/// label sets; +inf when either set does not occur.
class LabelSetDistances {
 public:
  explicit LabelSetDistances(const LabelSetIndex& sets);
  std::size_t size() const { return n_; }
  double operator()(std::uint32_t a, std::uint32_t b) const { return table_[a * n_ + b]; }

 private:
  std::size_t n_;
  std::vector<double> table_;
};

/// g(l, q): lower bound on the remaining cost to acceptance when standing in
/// a region with label set l after the automaton moved to q. Zero for
/// accepting q, +inf when acceptance is unreachable.
class GTable {
 public:
  GTable(std::size_t sets, std::size_t states) : states_(states), values_(sets * states, kInfinity) {}
  std::size_t num_sets() const { return values_.size() / std::max<std::size_t>(states_, 1); }
  std::size_t num_states() const { return states_; }
  double operator()(std::uint32_t set, StateId q) const { return values_[set * states_ + q]; }
  double& at(std::uint32_t set, StateId q) { return values_[set * states_ + q]; }

 private:
  std::size_t states_;
  std::vector<double> values_;
};

/// Least fixed point of g(l,q) = min_l' c_l(l,l') + g(l', T(q,l')) with
/// g = 0 on accepting states, by Dijkstra over (label set, state) nodes.
/// Only l' with T(q,l') != q take part.
GTable compute_g(const TaskAutomaton& a, const LabelTransitions& trans, const LabelSetDistances& cl);

/// CSV rows `label_set,state,g`.
std::string g_table_csv(const GTable& g, const LabelSetIndex& sets);

/// h(x, q) = 0 for accepting q, else min over label sets l' with
/// T(q, l') != q of dist(x, l') + g(l', T(q, l')).
class LtlHeuristic {
 public:
  LtlHeuristic(const TaskAutomaton& a, const LabelGrid& lg);

  double operator()(Cell c, StateId q) const;
  double operator()(std::size_t cell, StateId q) const;

  const GTable& g() const { return g_; }
  const LabelSetIndex& sets() const { return sets_; }
  const LabelSetDistances& set_distances() const { return cl_; }
  const LabelTransitions& transitions() const { return trans_; }

 private:
  const TaskAutomaton* automaton_;
  int width_;
  LabelTransitions trans_;
  LabelSetIndex sets_;
  LabelSetDistances cl_;
  GTable g_;
};

}  // namespace ltlnav
