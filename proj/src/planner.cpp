#include "ltlnav/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <queue>

namespace ltlnav {

namespace {

constexpr std::array<std::pair<int, int>, 8> kDirections{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

struct OpenEntry {
  double f;
  double g;
  Cell cell;
  StateId q;
};

// Lowest f first; ties prefer larger g, then smaller (cell, q).
struct WorseThan {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    if (a.cell != b.cell) return b.cell < a.cell;
    return a.q > b.q;
  }
};

}  // namespace

StartOccupied::StartOccupied(Cell c)
    : std::runtime_error("start cell (" + std::to_string(c.x) + "," + std::to_string(c.y) + ") is not free") {}

double default_safety_margin(double resolution) { return 0.5 * resolution; }

std::vector<std::pair<Cell, double>> neighbors(const SemanticGrid& g, Cell c) {
  std::vector<std::pair<Cell, double>> out;
  out.reserve(8);
  for (auto [dx, dy] : kDirections) {
    const Cell n{c.x + dx, c.y + dy};
    if (!g.in_bounds(n)) continue;
    out.emplace_back(n, (dx != 0 && dy != 0) ? std::sqrt(2.0) * g.resolution() : g.resolution());
  }
  return out;
}

bool edge_valid(const SemanticGrid& g, Cell a, Cell b, double safety_margin) {
  if (!g.traversable(a) || !g.traversable(b)) return false;
  const Point2 pa = g.center(a);
  const Point2 pb = g.center(b);
  const double dx = pb.x - pa.x;
  const double dy = pb.y - pa.y;
  const double alpha = std::hypot(dx, dy);
  if (alpha == 0.0) return true;
  const double lo = -safety_margin / alpha;
  const double hi = 1.0 + safety_margin / alpha;
  const double spacing = g.resolution() / 2.0;
  const auto steps = static_cast<int>(std::ceil((alpha + 2.0 * safety_margin) / spacing - 1e-9));
  for (int k = 0; k <= steps; ++k) {
    const double t = lo + (hi - lo) * k / steps;
    Cell c = g.cell_of({pa.x + t * dx, pa.y + t * dy});
    c.x = std::clamp(c.x, 0, g.width() - 1);
    c.y = std::clamp(c.y, 0, g.height() - 1);
    if (!g.traversable(c)) return false;
  }
  return true;
}

ProductPath plan(const SemanticGrid& g, const LabelGrid& lg, const TaskAutomaton& a, const LtlHeuristic* heuristic,
                 Cell start, const PlannerOptions& options) {
  if (!g.in_bounds(start) || !g.traversable(start)) throw StartOccupied(start);
  if (lg.width() != g.width() || lg.height() != g.height()) throw std::invalid_argument("label grid does not match map");

  std::optional<LabelTransitions> own;
  const LabelTransitions* trans = nullptr;
  if (heuristic) {
    trans = &heuristic->transitions();
  } else {
    own.emplace(a, lg);
    trans = &*own;
  }
  const LtlHeuristic* h = options.use_heuristic ? heuristic : nullptr;

  const std::size_t Q = a.num_states();
  const std::size_t N = g.size();
  std::vector<double> best(N * Q, kInfinity);
  std::vector<std::int64_t> parent(N * Q, -1);
  std::vector<std::uint8_t> closed(N * Q, 0);
  // Per cell and direction: 0 unknown, 1 valid, 2 invalid.
  std::vector<std::uint8_t> edge_cache(N * kDirections.size(), 0);

  auto node_index = [&](Cell c, StateId q) { return g.index(c) * Q + q; };
  auto estimate = [&](Cell c, StateId q) { return h ? (*h)(g.index(c), q) : 0.0; };

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, WorseThan> open;
  const StateId q0 = TaskAutomaton::kInitial;
  best[node_index(start, q0)] = 0.0;
  if (const double h0 = estimate(start, q0); !std::isinf(h0)) open.push({h0, 0.0, start, q0});

  ProductPath path;
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const std::size_t idx = node_index(top.cell, top.q);
    if (closed[idx] || top.g > best[idx]) continue;
    closed[idx] = 1;
    ++path.expansions;

    const StateId next_q = (*trans)(top.q, lg.label_set_id(top.cell));
    if (a.is_accepting(next_q)) {
      std::vector<std::size_t> chain;
      for (std::int64_t cur = static_cast<std::int64_t>(idx); cur >= 0; cur = parent[cur]) {
        chain.push_back(static_cast<std::size_t>(cur));
      }
      std::reverse(chain.begin(), chain.end());
      for (std::size_t n : chain) {
        path.cells.push_back(g.cell_at(n / Q));
        path.states.push_back(static_cast<StateId>(n % Q));
      }
      path.states.push_back(next_q);
      path.cost = top.g;
      path.word = word_of_path(lg, path.cells);
      return path;
    }

    const std::size_t cell_index = g.index(top.cell);
    for (std::size_t d = 0; d < kDirections.size(); ++d) {
      const auto [dx, dy] = kDirections[d];
      const Cell n{top.cell.x + dx, top.cell.y + dy};
      if (!g.in_bounds(n)) continue;
      std::uint8_t& cached = edge_cache[cell_index * kDirections.size() + d];
      if (cached == 0) cached = edge_valid(g, top.cell, n, options.safety_margin) ? 1 : 2;
      if (cached != 1) continue;
      const double step = (dx != 0 && dy != 0) ? std::sqrt(2.0) * g.resolution() : g.resolution();
      const double cost = top.g + step;
      const std::size_t nidx = node_index(n, next_q);
      if (closed[nidx] || cost >= best[nidx]) continue;
      const double hn = estimate(n, next_q);
      if (std::isinf(hn)) continue;
      best[nidx] = cost;
      parent[nidx] = static_cast<std::int64_t>(idx);
      open.push({cost + hn, cost, n, next_q});
    }
  }
  throw NoPath();
}

bool verify(const ProductPath& path, const Formula& f, const LabelGrid& lg) {
  return ltl::eval_finite(f, word_of_path(lg, path.cells));
}

double path_length(const SemanticGrid& g, const std::vector<Cell>& cells) {
  double total = 0.0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const int dx = std::abs(cells[i].x - cells[i - 1].x);
    const int dy = std::abs(cells[i].y - cells[i - 1].y);
    total += (dx && dy) ? std::sqrt(2.0) * g.resolution() : (dx + dy) * g.resolution();
  }
  return total;
}

}  // namespace ltlnav
