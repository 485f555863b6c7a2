#include <doctest.h>

#include "oracles.hpp"

using namespace ltlnav;
using namespace ltlnav::ltl;

namespace {

MapFile row_map(const std::string& row, double r = 0.0) {
  return parse_ascii_map("resolution=0.5\nlegend: a=alpha,r=" + std::to_string(r) +
                         "\nlegend: b=beta,r=0\n" + row + "\n");
}

}  // namespace

TEST_CASE("label set distances") {
  const MapFile m = row_map("a....b");
  const LabelGrid lg = build_label_grid(m.grid);
  const LabelSetIndex sets(lg);
  const LabelSetDistances cl(sets);
  std::uint32_t ia = 0, ib = 0;
  for (std::uint32_t i = 0; i < sets.size(); ++i) {
    CHECK(cl(i, i) == (sets.occurs(i) ? 0.0 : kInfinity));
    if (sets.set(i) == Letter{"alpha"}) ia = i;
    if (sets.set(i) == Letter{"beta"}) ib = i;
  }
  CHECK(cl(ia, ib) == doctest::Approx(5 * 0.5));
  CHECK(cl(ib, ia) == cl(ia, ib));
  CHECK(sets.distance(ib, 0) == doctest::Approx(2.5));
}

TEST_CASE("missing label set is infinitely far") {
  const MapFile m = row_map("a....");
  const LabelGrid lg = build_label_grid(m.grid);
  const LabelSetIndex sets(lg);
  const LabelSetDistances cl(sets);
  // the empty set always has index 0 and occurs here
  CHECK(sets.occurs(0));
  bool saw_missing = false;
  for (std::uint32_t i = 0; i < sets.size(); ++i) {
    if (sets.occurs(i)) continue;
    saw_missing = true;
    CHECK(cl(0, i) == kInfinity);
  }
  CHECK((saw_missing || sets.size() == 2));
}

TEST_CASE("g for eventually") {
  // the {beta} cells keep the automaton where it is, so {} is 4 cells from progress
  const MapFile m = row_map("....bbba");
  const LabelGrid lg = build_label_grid(m.grid);
  const TaskAutomaton aut = compile(parse_prefix("F alpha"), lg.label_sets());
  const LtlHeuristic h(aut, lg);
  CHECK(h.g()(0, TaskAutomaton::kInitial) == doctest::Approx(4 * 0.5));
  CHECK(h({0, 0}, TaskAutomaton::kInitial) == doctest::Approx(7 * 0.5));
  CHECK(h({7, 0}, TaskAutomaton::kInitial) == 0.0);
  for (StateId q = 0; q < aut.num_states(); ++q) {
    if (aut.is_accepting(q)) CHECK(h({0, 0}, q) == 0.0);
  }
}

TEST_CASE("unreachable acceptance gives infinity") {
  const MapFile m = row_map("....a");
  const LabelGrid lg = build_label_grid(m.grid);
  const TaskAutomaton aut = compile(parse_prefix("F beta"), lg.label_sets());
  const LtlHeuristic h(aut, lg);
  for (std::uint32_t s = 0; s < h.g().num_sets(); ++s) CHECK(h.g()(s, TaskAutomaton::kInitial) == kInfinity);
  CHECK(h({0, 0}, TaskAutomaton::kInitial) == kInfinity);
}

TEST_CASE("corridor heuristic") {
  const MapFile m = load_map(oracle::data_dir() / "maps" / "corridor.map");
  const LabelGrid lg = build_label_grid(m.grid);
  const TaskAutomaton aut = compile(parse_prefix("F beacon"), lg.label_sets());
  const LtlHeuristic h(aut, lg);
  CHECK(h(*m.start, TaskAutomaton::kInitial) == doctest::Approx(7.0));
}

TEST_CASE("heuristic is admissible and consistent on a bench map") {
  const MapFile m = load_map(oracle::bench_maps()[2]);
  const LabelGrid lg = build_label_grid(m.grid);
  const double ro = m.safety_margin.value_or(default_safety_margin(m.grid.resolution()));
  for (const auto& [tier, f] : oracle::tiered_formulas(oracle::object_classes(m.grid))) {
    const TaskAutomaton aut = compile(f, lg.label_sets());
    const LtlHeuristic h(aut, lg);
    const oracle::ProductGraph pg = oracle::build_product(m.grid, lg, aut, ro);
    const std::vector<double> exact = oracle::cost_to_accept(pg);
    for (std::size_t i = 0; i < m.grid.size(); ++i) {
      for (StateId q = 0; q < aut.num_states(); ++q) {
        const std::size_t u = pg.node(i, q);
        const double hu = h(i, q);
        REQUIRE(hu <= exact[u] + 1e-9);
        if (pg.goal[u]) continue;
        for (const auto& [v, c] : pg.out[u]) REQUIRE(hu <= c + h(v / pg.Q, static_cast<StateId>(v % pg.Q)) + 1e-9);
      }
    }
  }
}

TEST_CASE("g table csv") {
  const MapFile m = row_map("....a");
  const LabelGrid lg = build_label_grid(m.grid);
  const TaskAutomaton aut = compile(parse_prefix("F alpha"), lg.label_sets());
  const LtlHeuristic h(aut, lg);
  const std::string csv = g_table_csv(h.g(), h.sets());
  CHECK(csv.rfind("label_set,state,g\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(h.g().num_sets() * aut.num_states()));
}
