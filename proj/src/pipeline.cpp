#include "ltlnav/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <thread>

namespace ltlnav {

using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Cell cell_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("cell must be [x, y]");
  return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

ltl::Formula to_class_names(const ltl::Formula& f, const ObjectTable& table) {
  return ltl::rename_props(f, [&](const std::string& p) -> std::string {
    if (auto name = table.name_of(p)) return *name;
    if (table.id_of(p)) return {};
    throw std::invalid_argument("proposition '" + p + "' names no class or object id on this map");
  });
}

PlanOutcome run_plan(const MapFile& map, const PlanRequest& request, LlmClient* llm,
                     const PromptTemplates* templates) {
  PlanOutcome out;
  const SemanticGrid& g = map.grid;
  const ObjectTable table(g.classes());

  if (request.start) {
    out.start = *request.start;
  } else if (map.start) {
    out.start = *map.start;
  } else {
    out.message = "no start cell given and the map does not define one";
    return out;
  }
  if (!g.in_bounds(out.start)) {
    out.message = "start cell (" + std::to_string(out.start.x) + "," + std::to_string(out.start.y) +
                  ") is outside the map";
    return out;
  }

  ltl::Formula with_ids;
  if (request.ltl) {
    try {
      with_ids = ltl::parse(*request.ltl, request.format);
    } catch (const ltl::ParseError& e) {
      out.code = ExitCode::Syntactic;
      out.message = std::string("invalid formula: ") + e.what();
      return out;
    }
  } else if (request.instruction) {
    if (!llm || !templates) {
      out.message = "translating an instruction needs a language model (--replay or --llm-endpoint)";
      return out;
    }
    try {
      out.translation = translate(*request.instruction, table, *llm, *templates, request.translate);
      out.llm_seconds = out.translation->runtime.count();
      with_ids = out.translation->formula;
    } catch (const SyntacticFailure& e) {
      out.code = ExitCode::Syntactic;
      out.message = e.what();
      return out;
    } catch (const std::exception& e) {
      out.message = e.what();
      return out;
    }
  } else {
    out.message = "either an instruction or a formula is required";
    return out;
  }

  try {
    out.formula = to_class_names(with_ids, table);
  } catch (const std::invalid_argument& e) {
    out.code = ExitCode::Syntactic;
    out.message = e.what();
    return out;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const LabelGrid lg = build_label_grid(g, request.radii);
    const TaskAutomaton a = compile(out.formula, lg.label_sets());
    out.automaton_states = a.num_states();
    PlannerOptions options;
    options.safety_margin = request.safety_margin.value_or(map.safety_margin.value_or(default_safety_margin(g.resolution())));
    options.use_heuristic = request.use_heuristic;
    std::optional<LtlHeuristic> h;
    if (options.use_heuristic) h.emplace(a, lg);
    out.path = plan(g, lg, a, h ? &*h : nullptr, out.start, options);
    out.plan_seconds = seconds_since(t0);
    if (!verify(*out.path, out.formula, lg)) {
      out.message = "internal error: planned path does not satisfy the formula";
      return out;
    }
    out.code = ExitCode::Success;
  } catch (const NoPath& e) {
    out.plan_seconds = seconds_since(t0);
    out.code = ExitCode::NoPath;
    out.message = e.what();
  } catch (const std::exception& e) {
    out.plan_seconds = seconds_since(t0);
    out.message = e.what();
  }
  return out;
}

std::string path_record_json(const MapFile& map, const PlanOutcome& outcome, const std::string& map_path) {
  json j;
  j["map"] = map_path;
  j["resolution"] = map.grid.resolution();
  j["start"] = {outcome.start.x, outcome.start.y};
  j["formula"] = ltl::to_prefix(outcome.formula);
  j["automaton_states"] = outcome.automaton_states;
  if (outcome.translation) {
    j["grounded"] = outcome.translation->grounded;
    j["attempts"] = outcome.translation->attempts;
    j["objects"] = outcome.translation->objects;
  }
  if (outcome.path) {
    const ProductPath& p = *outcome.path;
    json cells = json::array();
    for (const Cell& c : p.cells) cells.push_back({c.x, c.y});
    j["cells"] = cells;
    j["states"] = p.states;
    json word = json::array();
    for (const Letter& l : p.word) word.push_back(l);
    j["word"] = word;
    j["cost"] = p.cost;
    j["expansions"] = p.expansions;
  }
  j["exit_code"] = static_cast<int>(outcome.code);
  if (!outcome.message.empty()) j["message"] = outcome.message;
  return j.dump(2) + "\n";
}

PathRecord parse_path_record(const std::string& json_text) {
  const json j = json::parse(json_text);
  PathRecord r;
  r.map_path = j.value("map", "");
  r.cost = j.value("cost", 0.0);
  r.formula = j.value("formula", "");
  if (j.contains("cells")) {
    for (const json& c : j.at("cells")) r.cells.push_back(cell_from_json(c));
  }
  return r;
}

std::string compose_instruction(const std::vector<std::string>& objectives) {
  if (objectives.empty()) return {};
  std::string out = "Complete " + objectives[0];
  for (std::size_t i = 1; i < objectives.size(); ++i) {
    if (i + 1 == objectives.size()) {
      out += ", and then " + objectives[i];
    } else {
      out += ", then complete " + objectives[i];
    }
  }
  return out + ".";
}

std::vector<EvalTask> load_suite(const std::filesystem::path& suite_file) {
  const json doc = json::parse(read_text_file(suite_file));
  const auto base = suite_file.parent_path();
  std::vector<EvalTask> tasks;
  for (const json& t : doc.at("tasks")) {
    EvalTask task;
    task.name = t.value("name", "task_" + std::to_string(tasks.size() + 1));
    task.map = base / t.at("map").get<std::string>();
    if (t.contains("start")) task.start = cell_from_json(t.at("start"));
    if (t.contains("ltl")) task.ltl = t.at("ltl").get<std::string>();
    if (t.contains("instruction")) task.instruction = t.at("instruction").get<std::string>();
    if (t.contains("objectives")) {
      for (const json& o : t.at("objectives")) task.objectives.push_back({o.at("name").get<std::string>(), cell_from_json(o.at("cell"))});
    }
    if (t.contains("rc")) {
      for (const auto& [k, v] : t.at("rc").items()) task.radii[k] = v.get<double>();
    }
    if (t.contains("ro")) task.safety_margin = t.at("ro").get<double>();
    if (!task.ltl && !task.instruction) {
      std::vector<std::string> names;
      for (const auto& o : task.objectives) names.push_back(o.name);
      if (names.empty()) throw std::invalid_argument("task " + task.name + " has no formula, instruction or objectives");
      task.instruction = compose_instruction(names);
    }
    tasks.push_back(std::move(task));
  }
  return tasks;
}

const char* to_string(TaskOutcome o) {
  switch (o) {
    case TaskOutcome::Success:
      return "success";
    case TaskOutcome::SemanticFailure:
      return "semantic_failure";
    case TaskOutcome::SyntacticFailure:
      return "syntactic_failure";
    case TaskOutcome::NoPath:
      return "no_path";
    case TaskOutcome::Error:
      return "error";
  }
  return "error";
}

bool objectives_reached(const std::vector<Cell>& path, const std::vector<Objective>& objectives) {
  std::size_t next = 0;
  for (const Cell& c : path) {
    if (next < objectives.size() && c == objectives[next].cell) ++next;
  }
  return next == objectives.size();
}

namespace {

TaskResult run_task(const EvalTask& task, LlmClient* llm, const PromptTemplates* templates, const EvalOptions& options) {
  TaskResult r;
  r.name = task.name;
  try {
    const MapFile map = load_map(task.map);
    PlanRequest req;
    req.ltl = task.ltl;
    if (!task.ltl) req.instruction = task.instruction;
    req.start = task.start;
    req.radii = task.radii;
    req.safety_margin = task.safety_margin;
    req.use_heuristic = options.use_heuristic;
    req.translate = options.translate;
    const PlanOutcome out = run_plan(map, req, llm, templates);
    r.message = out.message;
    r.llm_seconds = out.llm_seconds;
    r.plan_seconds = out.plan_seconds;
    if (out.translation) r.attempts = out.translation->attempts;
    if (out.code == ExitCode::Success || out.code == ExitCode::NoPath) r.formula = ltl::to_prefix(out.formula);
    switch (out.code) {
      case ExitCode::Success:
        r.path_length = path_length(map.grid, out.path->cells);
        r.cost = out.path->cost;
        r.expansions = out.path->expansions;
        r.outcome = objectives_reached(out.path->cells, task.objectives) ? TaskOutcome::Success
                                                                          : TaskOutcome::SemanticFailure;
        break;
      case ExitCode::NoPath:
        r.outcome = TaskOutcome::NoPath;
        break;
      case ExitCode::Syntactic:
        r.outcome = TaskOutcome::SyntacticFailure;
        break;
      default:
        r.outcome = TaskOutcome::Error;
        break;
    }
  } catch (const std::exception& e) {
    r.outcome = TaskOutcome::Error;
    r.message = e.what();
  }
  return r;
}

}  // namespace

EvalReport summarize(std::vector<TaskResult> tasks) {
  EvalReport report;
  report.tasks = std::move(tasks);
  const double n = static_cast<double>(report.tasks.size());
  if (n == 0) return report;
  std::size_t ok = 0, semantic = 0, syntactic = 0, no_path = 0;
  double length = 0.0;
  std::vector<double> llm;
  for (const TaskResult& t : report.tasks) {
    switch (t.outcome) {
      case TaskOutcome::Success:
        ++ok;
        length += t.path_length;
        break;
      case TaskOutcome::SemanticFailure:
        ++semantic;
        break;
      case TaskOutcome::SyntacticFailure:
        ++syntactic;
        break;
      case TaskOutcome::NoPath:
        ++no_path;
        break;
      case TaskOutcome::Error:
        break;
    }
    if (t.attempts > 0) llm.push_back(t.llm_seconds);
  }
  report.accuracy = 100.0 * ok / n;
  report.mpl = ok ? length / ok : 0.0;
  report.semantic_rate = 100.0 * semantic / n;
  report.syntactic_rate = 100.0 * syntactic / n;
  report.no_path_rate = 100.0 * no_path / n;
  if (!llm.empty()) {
    double sum = 0.0;
    for (double v : llm) sum += v;
    report.llm_runtime_mean = sum / llm.size();
    double sq = 0.0;
    for (double v : llm) sq += (v - report.llm_runtime_mean) * (v - report.llm_runtime_mean);
    report.llm_runtime_std = std::sqrt(sq / llm.size());
  }
  return report;
}

EvalReport run_eval(const std::vector<EvalTask>& tasks, LlmClient* llm, const PromptTemplates* templates,
                    const EvalOptions& options) {
  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) results[i] = run_task(tasks[i], llm, templates, options);
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return summarize(std::move(results));
}

std::string eval_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "task,outcome,path_length,cost,expansions,attempts,llm_seconds,plan_seconds,formula,message\n";
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  out << std::setprecision(10);
  for (const TaskResult& t : report.tasks) {
    out << quote(t.name) << ',' << to_string(t.outcome) << ',' << t.path_length << ',' << t.cost << ','
        << t.expansions << ',' << t.attempts << ',' << t.llm_seconds << ',' << t.plan_seconds << ','
        << quote(t.formula) << ',' << quote(t.message) << '\n';
  }
  return out.str();
}

std::string eval_summary(const EvalReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "tasks:             " << report.tasks.size() << '\n';
  out << "accuracy:          " << report.accuracy << " %\n";
  out << "MPL:               " << report.mpl << '\n';
  out << "semantic failure:  " << report.semantic_rate << " %\n";
  out << "syntactic failure: " << report.syntactic_rate << " %\n";
  out << "no path:           " << report.no_path_rate << " %\n";
  out << std::setprecision(3);
  out << "LLM runtime:       " << report.llm_runtime_mean << " +- " << report.llm_runtime_std << " s\n";
  return out.str();
}

namespace {

std::string class_color(const SemanticGrid& g, ClassId id) {
  if (id == kFree) return "#ffffff";
  if (id == kNull) return "#333333";
  if (id == kUnknown) return "#bbbbbb";
  static const char* palette[] = {"#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
                                  "#46f0f0", "#f032e6", "#bcf60c", "#008080", "#9a6324"};
  const std::size_t h = std::hash<std::string>{}(g.classes()[id].name);
  return palette[h % std::size(palette)];
}

}  // namespace

std::string render_svg(const SemanticGrid& g, const std::vector<Cell>& path, double cell_pixels) {
  const double W = g.width() * cell_pixels;
  const double H = g.height() * cell_pixels;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\">\n";
  // y grows upward in the map, downward in SVG
  auto px = [&](int x) { return x * cell_pixels; };
  auto py = [&](int y) { return (g.height() - 1 - y) * cell_pixels; };
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const ClassId id = g.at({x, y});
      out << "<rect x=\"" << px(x) << "\" y=\"" << py(y) << "\" width=\"" << cell_pixels << "\" height=\""
          << cell_pixels << "\" fill=\"" << class_color(g, id) << "\" stroke=\"#dddddd\" stroke-width=\"0.5\">";
      if (g.classes().is_object(id)) out << "<title>" << g.classes()[id].name << "</title>";
      out << "</rect>\n";
    }
  }
  if (!path.empty()) {
    const double half = cell_pixels / 2;
    out << "<polyline fill=\"none\" stroke=\"#0050ff\" stroke-width=\"" << cell_pixels / 5 << "\" points=\"";
    for (std::size_t i = 0; i < path.size(); ++i) {
      out << (i ? " " : "") << px(path[i].x) + half << ',' << py(path[i].y) + half;
    }
    out << "\"/>\n";
    out << "<circle cx=\"" << px(path.front().x) + half << "\" cy=\"" << py(path.front().y) + half << "\" r=\""
        << cell_pixels / 3 << "\" fill=\"#00aa00\"/>\n";
    out << "<circle cx=\"" << px(path.back().x) + half << "\" cy=\"" << py(path.back().y) + half << "\" r=\""
        << cell_pixels / 3 << "\" fill=\"#cc0000\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_ascii(const SemanticGrid& g, const std::vector<Cell>& path) {
  std::vector<std::string> rows(g.height(), std::string(g.width(), '.'));
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const ClassId id = g.at({x, y});
      char c = '.';
      if (id == kNull) c = '#';
      if (id == kUnknown) c = '?';
      if (g.classes().is_object(id)) c = g.classes()[id].name.empty() ? 'o' : g.classes()[id].name[0];
      rows[y][x] = c;
    }
  }
  for (const Cell& c : path) rows[c.y][c.x] = '*';
  if (!path.empty()) {
    rows[path.front().y][path.front().x] = 'S';
    rows[path.back().y][path.back().x] = 'G';
  }
  std::string out;
  for (const auto& r : rows) out += r + "\n";
  return out;
}

}  // namespace ltlnav
