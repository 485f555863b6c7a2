#include "ltlnav/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace ltlnav {

LabelTransitions::LabelTransitions(const TaskAutomaton& a, const LabelGrid& lg)
    : num_states_(a.num_states()), num_sets_(lg.label_sets().size()), table_(num_states_ * num_sets_) {
  for (std::uint32_t s = 0; s < num_sets_; ++s) {
    const LetterId letter = a.letter_id(lg.label_sets()[s]);
    for (StateId q = 0; q < num_states_; ++q) table_[q * num_sets_ + s] = a.step(q, letter);
  }
}

LabelSetIndex::LabelSetIndex(const LabelGrid& lg) : sets_(lg.label_sets()) {
  const std::size_t n = static_cast<std::size_t>(lg.width()) * lg.height();
  cells_.resize(sets_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Cell c{static_cast<int>(i % lg.width()), static_cast<int>(i / lg.width())};
    cells_[lg.label_set_id(c)].push_back(i);
  }
  std::vector<std::uint8_t> sites(n);
  for (std::uint32_t s = 0; s < sets_.size(); ++s) {
    occurs_.push_back(cells_[s].empty() ? 0 : 1);
    if (cells_[s].empty()) {
      fields_.emplace_back(n, kInfinity);
      continue;
    }
    std::fill(sites.begin(), sites.end(), 0);
    for (std::size_t i : cells_[s]) sites[i] = 1;
    std::vector<double> field = squared_distance_transform(lg.width(), lg.height(), sites);
    for (double& d : field) d = std::sqrt(d) * lg.resolution();
    fields_.push_back(std::move(field));
  }
}

LabelSetDistances::LabelSetDistances(const LabelSetIndex& sets) : n_(sets.size()), table_(n_ * n_, kInfinity) {
  for (std::uint32_t a = 0; a < n_; ++a) {
    for (std::uint32_t b = 0; b < n_; ++b) {
      double best = kInfinity;
      for (std::size_t cell : sets.cells(a)) best = std::min(best, sets.distance(b, cell));
      table_[a * n_ + b] = best;
    }
  }
}

GTable compute_g(const TaskAutomaton& a, const LabelTransitions& trans, const LabelSetDistances& cl) {
  const std::size_t S = trans.num_sets();
  const std::size_t Q = trans.num_states();
  GTable g(S, Q);

  // preds[l' * Q + q''] = states q != q'' with T(q, l') = q''. Self-loops
  // are left out: a non-accepting state only reaches acceptance by changing.
  std::vector<std::vector<StateId>> preds(S * Q);
  for (std::uint32_t l = 0; l < S; ++l) {
    for (StateId q = 0; q < Q; ++q) {
      if (trans(q, l) != q) preds[l * Q + trans(q, l)].push_back(q);
    }
  }

  using Entry = std::pair<double, std::size_t>;  // (value, l * Q + q)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  for (StateId q = 0; q < Q; ++q) {
    if (!a.is_accepting(q)) continue;
    for (std::uint32_t l = 0; l < S; ++l) {
      g.at(l, q) = 0.0;
      open.emplace(0.0, l * Q + q);
    }
  }
  while (!open.empty()) {
    const auto [value, node] = open.top();
    open.pop();
    const auto lp = static_cast<std::uint32_t>(node / Q);
    const auto qp = static_cast<StateId>(node % Q);
    if (value > g(lp, qp)) continue;
    for (StateId q : preds[lp * Q + qp]) {
      for (std::uint32_t l = 0; l < S; ++l) {
        const double candidate = cl(l, lp) + value;
        if (candidate < g(l, q)) {
          g.at(l, q) = candidate;
          open.emplace(candidate, l * Q + q);
        }
      }
    }
  }
  return g;
}

std::string g_table_csv(const GTable& g, const LabelSetIndex& sets) {
  std::ostringstream out;
  out.precision(17);
  out << "label_set,state,g\n";
  for (std::uint32_t l = 0; l < g.num_sets(); ++l) {
    std::string name = "{";
    bool first = true;
    for (const auto& p : sets.set(l)) {
      name += (first ? "" : ",") + p;
      first = false;
    }
    name += "}";
    for (StateId q = 0; q < g.num_states(); ++q) {
      out << '"' << name << "\"," << q << ',';
      if (std::isinf(g(l, q))) {
        out << "inf";
      } else {
        out << g(l, q);
      }
      out << '\n';
    }
  }
  return out.str();
}

LtlHeuristic::LtlHeuristic(const TaskAutomaton& a, const LabelGrid& lg)
    : automaton_(&a),
      width_(lg.width()),
      trans_(a, lg),
      sets_(lg),
      cl_(sets_),
      g_(compute_g(a, trans_, cl_)) {}

double LtlHeuristic::operator()(std::size_t cell, StateId q) const {
  if (automaton_->is_accepting(q)) return 0.0;
  double best = kInfinity;
  for (std::uint32_t s = 0; s < sets_.size(); ++s) {
    if (trans_(q, s) == q) continue;
    const double tail = g_(s, trans_(q, s));
    if (std::isinf(tail)) continue;
    best = std::min(best, sets_.distance(s, cell) + tail);
  }
  return best;
}

double LtlHeuristic::operator()(Cell c, StateId q) const {
  return (*this)(static_cast<std::size_t>(c.y) * width_ + c.x, q);
}

}  // namespace ltlnav
