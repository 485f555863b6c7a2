// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ltlnav/pipeline.hpp"
#include "oracles.hpp"

using namespace ltlnav;
using ltl::Formula;
using nlohmann::json;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Verdict()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("[%s] %s (%.1fs) %s\n", v.pass ? "PASS" : "FAIL", name, secs, v.detail.c_str());
  std::fflush(stdout);
}

// 1 ---------------------------------------------------------------------------
Verdict automaton_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  oracle::FormulaGen gen(1, {"a", "b", "c"});
  std::size_t words = 0, mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const Formula f = gen(4);
    const TaskAutomaton a = compile(f);  // letter id == bitmask over atomic_props(f)
    const ltl::FiniteEvaluator eval(f, a.propositions());
    const auto k = static_cast<std::uint32_t>(a.num_letters());
    std::vector<std::uint32_t> w;
    std::vector<StateId> states{TaskAutomaton::kInitial};
    // depth-first over all words of length <= 6, reusing the automaton run
    std::function<void()> visit = [&] {
      ++words;
      if (a.is_accepting(states.back()) != eval(w)) ++mismatches;
      if (w.size() == 6) return;
      for (std::uint32_t l = 0; l < k; ++l) {
        w.push_back(l);
        states.push_back(a.step(states[states.size() - 1], l));
        visit();
        w.pop_back();
        states.pop_back();
      }
    };
    visit();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream d;
  d << words << " words, " << mismatches << " mismatches, " << secs << " s";
  return {mismatches == 0 && secs < 60.0, d.str()};
}

// 2 ---------------------------------------------------------------------------
std::string nested_dsl(const Formula& f) {
  using ltl::Op;
  switch (f.op()) {
    case Op::Atom:
      return "ap('" + f.name() + "')";
    case Op::Not:
      return "ltl_not(" + nested_dsl(f.lhs()) + ")";
    case Op::Next:
      return "ltl_next(" + nested_dsl(f.lhs()) + ")";
    case Op::Eventually:
      return "ltl_eventually(" + nested_dsl(f.lhs()) + ")";
    case Op::Always:
      return "ltl_always(" + nested_dsl(f.lhs()) + ")";
    case Op::And:
      return "ltl_and(" + nested_dsl(f.lhs()) + ", " + nested_dsl(f.rhs()) + ")";
    case Op::Or:
      return "ltl_or(" + nested_dsl(f.lhs()) + ", " + nested_dsl(f.rhs()) + ")";
    case Op::Until:
      return "ltl_until(" + nested_dsl(f.lhs()) + ",\n        " + nested_dsl(f.rhs()) + ")";
    case Op::Imply:
      return "ltl_imply(" + nested_dsl(f.lhs()) + ", " + nested_dsl(f.rhs()) + ")";
    default:
      throw std::invalid_argument("not expressible");
  }
}

Verdict zero_syntactic_failures() {
  std::vector<std::string> programs;
  const json cases = json::parse(read_text_file(oracle::data_dir() / "transcripts" / "cases.json"));
  for (const json& c : cases.at("cases")) {
    for (const json& a : c.at("answers")) programs.push_back(a.get<std::string>());
  }
  oracle::FormulaGen gen(2, {"object_1", "object_2", "object_3", "object_4"}, false);
  std::mt19937 rng(3);
  for (int i = 0; programs.size() < 400; ++i) {
    const Formula f = gen(1 + i % 5);
    if (f.op() == ltl::Op::True || f.op() == ltl::Op::False) continue;
    std::string code;
    switch (i % 3) {
      case 0:
        code = formula_to_dsl(f);
        break;
      case 1:
        code = "```python\ndef question():\n    \"\"\"\n    generated\n    \"\"\"\n    # nested form\n    return " +
               nested_dsl(f) + "\n```\n";
        break;
      default: {
        // random single-character damage; kept only if it still parses
        code = formula_to_dsl(f);
        const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, code.size() - 1)(rng);
        const char junk[] = {'(', ')', ',', '"', 'x', ' ', '\n', '=', '#'};
        code[pos] = junk[std::uniform_int_distribution<int>(0, 8)(rng)];
        break;
      }
    }
    programs.push_back(code);
  }

  std::size_t parsed = 0, failures = 0;
  std::string first_failure;
  for (const std::string& code : programs) {
    DslProgram p;
    try {
      p = parse_dsl(code);
    } catch (const DslError&) {
      continue;
    }
    ++parsed;
    try {
      const Formula f = eval_dsl(p);
      const std::string prefix = ltl::to_prefix(f);
      if (!(ltl::parse_prefix(prefix) == f)) throw std::runtime_error("round trip changed " + prefix);
      const std::string infix = ltl::to_infix(f);
      if (!(ltl::parse_infix(infix) == f)) throw std::runtime_error("round trip changed " + infix);
    } catch (const std::exception& e) {
      if (failures++ == 0) first_failure = e.what();
    }
  }
  std::ostringstream d;
  d << parsed << " parsed programs of " << programs.size() << ", " << failures << " invalid formulas";
  if (failures) d << " (first: " << first_failure << ")";
  return {parsed >= 200 && failures == 0, d.str()};
}

// 3, 4 ------------------------------------------------------------------------
struct Instance {
  std::string map;
  int tier;
  Formula formula;
};

Verdict planner_optimality() {
  std::size_t instances = 0, solved = 0, cost_mismatch = 0, expansion_violations = 0;
  std::string first;
  for (const auto& path : oracle::bench_maps()) {
    const MapFile m = load_map(path);
    const LabelGrid lg = build_label_grid(m.grid);
    const double ro = m.safety_margin.value_or(default_safety_margin(m.grid.resolution()));
    for (const auto& [tier, f] : oracle::tiered_formulas(oracle::object_classes(m.grid))) {
      ++instances;
      const TaskAutomaton a = compile(f, lg.label_sets());
      const LtlHeuristic h(a, lg);
      const auto pg = oracle::build_product(m.grid, lg, a, ro);
      const double expected = oracle::product_dijkstra(pg, pg.node(m.grid.index(*m.start), TaskAutomaton::kInitial));
      double with_h = kInfinity, without_h = kInfinity;
      std::size_t exp_h = 0, exp_0 = 0;
      PlannerOptions opt;
      opt.safety_margin = ro;
      try {
        const ProductPath p = plan(m.grid, lg, a, &h, *m.start, opt);
        with_h = p.cost;
        exp_h = p.expansions;
        if (!verify(p, f, lg)) throw std::runtime_error("path fails its formula");
      } catch (const NoPath&) {
      }
      opt.use_heuristic = false;
      try {
        const ProductPath p = plan(m.grid, lg, a, nullptr, *m.start, opt);
        without_h = p.cost;
        exp_0 = p.expansions;
      } catch (const NoPath&) {
      }
      const auto same = [](double x, double y) { return (std::isinf(x) && std::isinf(y)) || std::abs(x - y) <= 1e-9; };
      if (!same(with_h, expected) || !same(without_h, expected)) {
        if (cost_mismatch++ == 0) {
          first = path.filename().string() + " " + ltl::to_prefix(f) + ": A* " + std::to_string(with_h) +
                  " vs oracle " + std::to_string(expected);
        }
      }
      if (!std::isinf(expected)) {
        ++solved;
        if (exp_h > exp_0) {
          if (expansion_violations++ == 0 && first.empty()) {
            first = path.filename().string() + " " + ltl::to_prefix(f) + ": expansions " + std::to_string(exp_h) +
                    " > " + std::to_string(exp_0);
          }
        }
      }
    }
  }
  std::ostringstream d;
  d << instances << " instances (" << solved << " solvable), " << cost_mismatch << " cost mismatches, "
    << expansion_violations << " expansion violations";
  if (!first.empty()) d << "; first: " << first;
  return {cost_mismatch == 0 && expansion_violations == 0 && solved > 0, d.str()};
}

Verdict heuristic_admissible_consistent() {
  std::size_t nodes = 0, edges = 0, admissibility = 0, consistency = 0;
  std::string first;
  for (const auto& path : oracle::bench_maps()) {
    const MapFile m = load_map(path);
    const LabelGrid lg = build_label_grid(m.grid);
    const double ro = m.safety_margin.value_or(default_safety_margin(m.grid.resolution()));
    for (const auto& [tier, f] : oracle::tiered_formulas(oracle::object_classes(m.grid))) {
      const TaskAutomaton a = compile(f, lg.label_sets());
      const LtlHeuristic h(a, lg);
      const auto pg = oracle::build_product(m.grid, lg, a, ro);
      const auto exact = oracle::cost_to_accept(pg);
      for (std::size_t u = 0; u < pg.out.size(); ++u) {
        ++nodes;
        const double hu = h(u / pg.Q, static_cast<StateId>(u % pg.Q));
        if (hu > exact[u] + 1e-9 && !(std::isinf(hu) && std::isinf(exact[u]))) {
          if (admissibility++ == 0) first = path.filename().string() + " " + ltl::to_prefix(f) + " admissibility";
        }
        for (const auto& [v, c] : pg.out[u]) {
          ++edges;
          const double hv = h(v / pg.Q, static_cast<StateId>(v % pg.Q));
          if (std::isinf(hv)) continue;  // nothing to bound
          if (hu > c + hv + 1e-9) {
            if (consistency++ == 0 && first.empty()) first = path.filename().string() + " " + ltl::to_prefix(f) + " consistency";
          }
        }
      }
    }
  }
  std::ostringstream d;
  d << nodes << " nodes, " << edges << " edges, " << admissibility << " admissibility and " << consistency
    << " consistency violations";
  if (!first.empty()) d << "; first: " << first;
  return {admissibility == 0 && consistency == 0, d.str()};
}

// 5 ---------------------------------------------------------------------------
Verdict label_map_brute_force() {
  std::mt19937 rng(5);
  std::size_t cells = 0, mismatches = 0;
  for (int t = 0; t < 50; ++t) {
    const int w = std::uniform_int_distribution<int>(1, 32)(rng);
    const int hgt = std::uniform_int_distribution<int>(1, 32)(rng);
    const double res = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
    ClassTable classes;
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    std::map<std::string, double> radii;
    for (int c = 0; c < k; ++c) {
      const std::string name = "class" + std::to_string(c);
      classes.add({name, "", std::nullopt, false, {}});
      // exact multiples of the resolution hit the boundary case
      radii[name] = (rng() % 3 == 0) ? res * std::uniform_int_distribution<int>(0, 6)(rng)
                                     : std::uniform_real_distribution<double>(0.0, 8.0 * res)(rng);
    }
    SemanticGrid g(w, hgt, res, {0.0, 0.0}, classes);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = u(rng);
      ClassId id = kFree;
      if (r < 0.1) id = static_cast<ClassId>(kFirstObjectClass + rng() % k);
      else if (r < 0.2) id = kNull;
      g.set(g.cell_at(i), id);
    }
    const LabelGrid lg = build_label_grid(g, radii);
    const auto expected = oracle::brute_labels(g, radii);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ++cells;
      if (lg.label(g.cell_at(i)) != expected[i]) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(cells) + " cells, " + std::to_string(mismatches) + " mismatches"};
}

// 6 ---------------------------------------------------------------------------
Verdict projection_golden() {
  const VoxelMap v = load_voxels(oracle::data_dir() / "fixtures" / "voxels.txt");
  const SemanticGrid g = project(v);
  const MapFile golden = load_map(oracle::data_dir() / "fixtures" / "voxels_expected.map");
  if (g.width() != golden.grid.width() || g.height() != golden.grid.height()) return {false, "size differs"};
  std::size_t diff = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const ClassId a = g.cells()[i];
    const ClassId b = golden.grid.cells()[i];
    const std::string na = g.classes().is_object(a) ? g.classes()[a].name : std::to_string(a);
    const std::string nb = golden.grid.classes().is_object(b) ? golden.grid.classes()[b].name : std::to_string(b);
    if (na != nb) ++diff;
  }
  // rule by rule
  const auto name = [&](int x, int y) {
    const ClassId id = g.at({x, y});
    return g.classes().is_object(id) ? g.classes()[id].name : std::string(id == kFree ? "FREE" : id == kNull ? "NULL" : "UNKNOWN");
  };
  const std::vector<std::tuple<int, int, std::string>> rules{
      {0, 0, "UNKNOWN"}, {2, 1, "UNKNOWN"}, {3, 2, "UNKNOWN"},  // unobserved
      {1, 0, "FREE"},    {3, 1, "FREE"},    {0, 2, "FREE"},     // only free observed
      {2, 0, "NULL"},    {2, 2, "NULL"},                        // only NULL occupied
      {3, 0, "table"},   {1, 1, "lamp"},                        // highest object
      {0, 1, "chair"},   {1, 2, "chair"},                       // equal heights
  };
  std::size_t rule_failures = 0;
  for (const auto& [x, y, want] : rules) {
    if (name(x, y) != want) ++rule_failures;
  }
  return {diff == 0 && rule_failures == 0,
          std::to_string(diff) + " cells differ from golden, " + std::to_string(rule_failures) + " of " +
              std::to_string(rules.size()) + " rule checks failed"};
}

// 7 ---------------------------------------------------------------------------
Verdict end_to_end_replay() {
  const auto data = oracle::data_dir();
  const json cases = json::parse(read_text_file(data / "transcripts" / "cases.json"));
  const PromptTemplates templates = PromptTemplates::load(data / "prompts");
  std::size_t n = 0, bad = 0;
  bool saw_code1 = false, saw_gtb = false;
  std::string first;
  {
    for (const json& c : cases.at("cases")) {
      ++n;
      const std::string name = c.at("name");
      const std::string map_path = (data / c.at("map").get<std::string>()).string();
      const MapFile map = load_map(map_path);
      PlanRequest req;
      req.instruction = c.at("instruction").get<std::string>();
      std::string records[2];
      PlanOutcome outs[2];
      for (int run = 0; run < 2; ++run) {
        ReplayLlmClient llm(data / "transcripts" / "replay");
        outs[run] = run_plan(map, req, &llm, &templates);
        records[run] = path_record_json(map, outs[run], c.at("map").get<std::string>());
      }
      const int want = c.at("expect_exit").get<int>();
      std::string problem;
      if (static_cast<int>(outs[0].code) != want) {
        problem = "exit " + std::to_string(static_cast<int>(outs[0].code)) + " != " + std::to_string(want) + " (" +
                  outs[0].message + ")";
      } else if (records[0] != records[1]) {
        problem = "non-deterministic path record";
      } else if (c.contains("expect_attempts") && (!outs[0].translation ||
                                                   outs[0].translation->attempts != c.at("expect_attempts").get<int>())) {
        problem = "unexpected attempt count";
      } else if (want == 0) {
        const LabelGrid lg = build_label_grid(map.grid);
        if (!verify(*outs[0].path, outs[0].formula, lg)) problem = "path does not satisfy its formula";
      }
      if (name.find("code1") != std::string::npos && outs[0].translation &&
          outs[0].translation->grounded == "Take object_36, then pick object_31. Always avoid the object_28.") {
        saw_code1 = true;
      }
      if (name.find("gtb") != std::string::npos && outs[0].code == ExitCode::NoPath) saw_gtb = true;
      if (!problem.empty() && bad++ == 0) first = name + ": " + problem;
    }
  }
  std::ostringstream d;
  d << n << " transcripts, " << bad << " failing";
  if (!first.empty()) d << "; first: " << first;
  return {bad == 0 && n >= 10 && saw_code1 && saw_gtb, d.str()};
}

// 8 ---------------------------------------------------------------------------
Verdict eval_metrics() {
  const auto suite = oracle::data_dir() / "suites" / "mini" / "suite.json";
  const auto tasks = load_suite(suite);
  EvalOptions opt;
  opt.jobs = 2;
  const EvalReport r = run_eval(tasks, nullptr, nullptr, opt);

  std::set<std::string> maps;
  double oracle_total = 0.0;
  for (const EvalTask& t : tasks) {
    maps.insert(t.map.string());
    const MapFile m = load_map(t.map);
    const LabelGrid lg = build_label_grid(m.grid, t.radii);
    const Formula f = to_class_names(ltl::parse_prefix(*t.ltl), ObjectTable(m.grid.classes()));
    const TaskAutomaton a = compile(f, lg.label_sets());
    const auto pg = oracle::build_product(m.grid, lg, a, t.safety_margin.value_or(m.safety_margin.value_or(0.5 * m.grid.resolution())));
    oracle_total += oracle::product_dijkstra(pg, pg.node(m.grid.index(t.start.value_or(*m.start)), 0));
  }
  const double oracle_mean = oracle_total / tasks.size();

  // a two-task suite where one task has no path scores 50 %
  std::vector<EvalTask> pair{tasks.front(), tasks.front()};
  pair[1].name = "blocked";
  pair[1].map = oracle::data_dir() / "maps" / "gtb_blocked.map";
  pair[1].ltl = "F object_3";
  pair[1].start = Cell{1, 1};
  pair[1].objectives = {{"objective_3", {11, 4}}};
  const EvalReport half = run_eval(pair, nullptr, nullptr);

  std::ostringstream d;
  d.precision(10);
  d << maps.size() << "-map mini-suite: accuracy " << r.accuracy << " %, MPL " << r.mpl << " vs oracle " << oracle_mean
    << "; one-no-path pair: " << half.accuracy << " %. Published dataset-scale figures need external data and a live model"
    << " and are not reproduced here";
  const bool ok = maps.size() >= 5 && r.accuracy == 100.0 && std::abs(r.mpl - oracle_mean) <= 1e-9 &&
                  half.accuracy == 50.0 && half.no_path_rate == 50.0;
  return {ok, d.str()};
}

}  // namespace

int main() {
  report("automaton matches the finite-trace oracle on all short words", automaton_oracle);
  report("generated code never yields an unparseable formula", zero_syntactic_failures);
  report("A* cost equals product-graph Dijkstra; heuristic never expands more", planner_optimality);
  report("heuristic admissible and consistent on every product node and edge", heuristic_admissible_consistent);
  report("label map equals brute force on random grids", label_map_brute_force);
  report("voxel projection golden and column rules", projection_golden);
  report("replayed transcripts drive plan deterministically; blocked task exits 2", end_to_end_replay);
  report("eval metrics: mini-suite 100 % accuracy and oracle MPL", eval_metrics);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
