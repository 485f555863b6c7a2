// Slow reference implementations the optimized code is checked against.
#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ltlnav/automaton.hpp"
#include "ltlnav/heuristic.hpp"
#include "ltlnav/map_io.hpp"
#include "ltlnav/planner.hpp"

#ifndef LTLNAV_DATA_DIR
#define LTLNAV_DATA_DIR "data"
#endif

namespace oracle {

using namespace ltlnav;
using ltl::Formula;
using ltl::Op;

inline std::filesystem::path data_dir() { return LTLNAV_DATA_DIR; }

// Direct recursion on the finite-trace semantics of the suffix w[i..].
inline bool holds(const Formula& f, const Word& w, std::size_t i) {
  const std::size_t n = w.size();
  switch (f.op()) {
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Atom:
      return i < n && w[i].count(f.name()) > 0;
    case Op::Not:
      return !holds(f.lhs(), w, i);
    case Op::And:
      return holds(f.lhs(), w, i) && holds(f.rhs(), w, i);
    case Op::Or:
      return holds(f.lhs(), w, i) || holds(f.rhs(), w, i);
    case Op::Imply:
      return !holds(f.lhs(), w, i) || holds(f.rhs(), w, i);
    case Op::Next:
      return i + 1 < n && holds(f.lhs(), w, i + 1);
    case Op::WeakNext:
      return i + 1 >= n || holds(f.lhs(), w, i + 1);
    case Op::Eventually:
      for (std::size_t j = i; j < n; ++j) {
        if (holds(f.lhs(), w, j)) return true;
      }
      return false;
    case Op::Always:
      for (std::size_t j = i; j < n; ++j) {
        if (!holds(f.lhs(), w, j)) return false;
      }
      return true;
    case Op::Until:
      for (std::size_t j = i; j < n; ++j) {
        if (holds(f.rhs(), w, j)) return true;
        if (!holds(f.lhs(), w, j)) return false;
      }
      return false;
    case Op::Release:
      // a R b == !(!a U !b)
      for (std::size_t j = i; j < n; ++j) {
        if (!holds(f.rhs(), w, j)) return false;
        if (holds(f.lhs(), w, j)) return true;
      }
      return true;
  }
  return false;
}

inline bool holds(const Formula& f, const Word& w) { return holds(f, w, 0); }

// Random formula of depth <= max_depth over the given propositions.
class FormulaGen {
 public:
  FormulaGen(std::uint64_t seed, std::vector<std::string> props, bool all_ops = true)
      : rng_(seed), props_(std::move(props)), all_ops_(all_ops) {}

  Formula operator()(int max_depth) { return gen(max_depth); }

 private:
  Formula gen(int depth) {
    std::uniform_int_distribution<int> leaf(0, 9);
    if (depth == 0 || leaf(rng_) < 2) {
      const int k = std::uniform_int_distribution<int>(0, static_cast<int>(props_.size()) + (all_ops_ ? 1 : -1))(rng_);
      if (k < static_cast<int>(props_.size())) return ltl::make_atom(props_[k]);
      return k == static_cast<int>(props_.size()) ? ltl::make_true() : ltl::make_false();
    }
    static const Op all[] = {Op::Not,     Op::And,   Op::Or,      Op::Imply,      Op::Next,  Op::WeakNext,
                             Op::Until,   Op::Release, Op::Eventually, Op::Always};
    static const Op dsl[] = {Op::Not, Op::And, Op::Or, Op::Imply, Op::Next, Op::Until, Op::Eventually, Op::Always};
    const Op op = all_ops_ ? all[std::uniform_int_distribution<int>(0, 9)(rng_)]
                           : dsl[std::uniform_int_distribution<int>(0, 7)(rng_)];
    if (ltl::is_unary(op)) return ltl::make_unary(op, gen(depth - 1));
    Formula a = gen(depth - 1);
    return ltl::make_binary(op, a, gen(depth - 1));
  }

  std::mt19937_64 rng_;
  std::vector<std::string> props_;
  bool all_ops_;
};

// O(N^2) label map: proposition c holds at x iff some cell of class c has
// its center within r_c of x's center.
inline std::vector<Letter> brute_labels(const SemanticGrid& g, const std::map<std::string, double>& radii) {
  std::vector<Letter> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Cell a = g.cell_at(i);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const ClassId id = g.cells()[j];
      if (!g.classes().is_object(id)) continue;
      const std::string& name = g.classes()[id].name;
      const Cell b = g.cell_at(j);
      const double d = std::hypot(a.x - b.x, a.y - b.y) * g.resolution();
      if (d <= radii.at(name) + 1e-9) out[i].insert(name);
    }
  }
  return out;
}

// Explicit product graph over (cell, state).
struct ProductGraph {
  std::size_t Q = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> out;  // node -> (node, cost)
  std::vector<std::uint8_t> goal;  // T(q, l(x)) accepting

  std::size_t node(std::size_t cell, StateId q) const { return cell * Q + q; }
};

inline ProductGraph build_product(const SemanticGrid& g, const LabelGrid& lg, const TaskAutomaton& a, double ro) {
  ProductGraph pg;
  pg.Q = a.num_states();
  const std::size_t N = g.size() * pg.Q;
  pg.out.resize(N);
  pg.goal.assign(N, 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Cell c = g.cell_at(i);
    const LetterId letter = a.letter_id(lg.label(c));
    for (StateId q = 0; q < pg.Q; ++q) {
      const StateId next = a.step(q, letter);
      pg.goal[pg.node(i, q)] = a.is_accepting(next) ? 1 : 0;
      for (const auto& [n, cost] : neighbors(g, c)) {
        if (!edge_valid(g, c, n, ro)) continue;
        pg.out[pg.node(i, q)].emplace_back(pg.node(g.index(n), next), cost);
      }
    }
  }
  return pg;
}

// Cost of the cheapest path from (start, q0) to any goal node; infinity if none.
inline double product_dijkstra(const ProductGraph& pg, std::size_t start_node) {
  std::vector<double> dist(pg.out.size(), kInfinity);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[start_node] = 0.0;
  open.emplace(0.0, start_node);
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) continue;
    if (pg.goal[u]) return d;
    for (const auto& [v, c] : pg.out[u]) {
      if (d + c < dist[v]) {
        dist[v] = d + c;
        open.emplace(dist[v], v);
      }
    }
  }
  return kInfinity;
}

// Exact cost-to-accept of every product node, by Dijkstra on reversed edges
// seeded with the goal nodes.
inline std::vector<double> cost_to_accept(const ProductGraph& pg) {
  const std::size_t N = pg.out.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> in(N);
  for (std::size_t u = 0; u < N; ++u) {
    for (const auto& [v, c] : pg.out[u]) in[v].emplace_back(u, c);
  }
  std::vector<double> dist(N, kInfinity);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  for (std::size_t u = 0; u < N; ++u) {
    if (pg.goal[u]) {
      dist[u] = 0.0;
      open.emplace(0.0, u);
    }
  }
  while (!open.empty()) {
    const auto [d, v] = open.top();
    open.pop();
    if (d > dist[v]) continue;
    for (const auto& [u, c] : in[v]) {
      if (pg.goal[u]) continue;  // search stops at goal nodes
      if (d + c < dist[u]) {
        dist[u] = d + c;
        open.emplace(dist[u], u);
      }
    }
  }
  return dist;
}

// Planning formulas of increasing difficulty over a map's object classes.
// Tier 1: reach one class. Tier 2: two classes, ordered or unordered.
// Tier 3: ordering plus an avoidance or until constraint.
inline std::vector<std::pair<int, Formula>> tiered_formulas(const std::vector<std::string>& classes) {
  using namespace ltl;
  std::vector<std::pair<int, Formula>> out;
  const auto p = [&](std::size_t i) { return make_atom(classes[i % classes.size()]); };
  out.emplace_back(1, make_eventually(p(0)));
  out.emplace_back(1, make_eventually(p(1)));
  out.emplace_back(2, make_and(make_eventually(p(0)), make_eventually(p(1))));
  out.emplace_back(2, make_eventually(make_and(p(1), make_eventually(p(2)))));
  out.emplace_back(3, make_and(make_eventually(make_and(p(0), make_eventually(p(1)))), make_always(make_not(p(2)))));
  out.emplace_back(3, make_and(make_until(make_not(p(1)), p(2)), make_eventually(p(1))));
  return out;
}

inline std::vector<std::filesystem::path> bench_maps() {
  std::vector<std::filesystem::path> out;
  for (int i = 1; i <= 20; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "bench_%02d.map", i);
    out.push_back(data_dir() / "maps" / name);
  }
  return out;
}

inline std::vector<std::string> object_classes(const SemanticGrid& g) {
  std::vector<std::string> out;
  for (std::size_t i = kFirstObjectClass; i < g.classes().size(); ++i) out.push_back(g.classes()[static_cast<ClassId>(i)].name);
  return out;
}

}  // namespace oracle
