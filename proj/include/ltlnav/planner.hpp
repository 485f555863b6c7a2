#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "ltlnav/automaton.hpp"
#include "ltlnav/heuristic.hpp"
#include "ltlnav/semmap.hpp"

namespace ltlnav {

struct ProductNode {
  Cell cell;
  StateId q = 0;
  auto operator<=>(const ProductNode&) const = default;
};

/// `states[t]` is the automaton state on arrival at `cells[t]`, before its
/// label is consumed; `states.back()` is the state after the last label and
/// is accepting.
struct ProductPath {
  std::vector<Cell> cells;
  std::vector<StateId> states;
  Word word;
  double cost = 0.0;
  std::size_t expansions = 0;
};

class NoPath : public std::runtime_error {
 public:
  NoPath() : std::runtime_error("no path satisfies the task") {}
};

class StartOccupied : public std::runtime_error {
 public:
  explicit StartOccupied(Cell c);
};

struct PlannerOptions {
  double safety_margin = 0.0;  // r_o in meters
  bool use_heuristic = true;
};

/// Safety margin used when the map file does not set one.
double default_safety_margin(double resolution);

/// In-bounds 8-neighbors with step cost resolution or sqrt(2)*resolution.
std::vector<std::pair<Cell, double>> neighbors(const SemanticGrid& g, Cell c);

/// The segment from a to b, extended by r_o past both ends, sampled every
/// resolution/2 (samples clamped to the grid) must only touch traversable
/// cells.
bool edge_valid(const SemanticGrid& g, Cell a, Cell b, double safety_margin);

/// A* over the implicit product of the grid and the automaton. Moving out of
/// a cell consumes its label; the search stops at the first cell whose label
/// takes the automaton into an accepting state. `heuristic` may be null
/// (h = 0) and is ignored when options.use_heuristic is false.
ProductPath plan(const SemanticGrid& g, const LabelGrid& lg, const TaskAutomaton& a, const LtlHeuristic* heuristic,
                 Cell start, const PlannerOptions& options = {});

/// Recomputes the word of the path and checks it with eval_finite.
bool verify(const ProductPath& path, const Formula& f, const LabelGrid& lg);

double path_length(const SemanticGrid& g, const std::vector<Cell>& cells);

}  // namespace ltlnav
