#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ltlnav/automaton.hpp"
#include "ltlnav/codegen.hpp"
#include "ltlnav/dsl.hpp"
#include "ltlnav/map_io.hpp"
#include "ltlnav/pipeline.hpp"

namespace py = pybind11;
using namespace ltlnav;

namespace {

ltl::TextFormat text_format(const std::string& name) {
  if (name == "prefix") return ltl::TextFormat::Prefix;
  if (name == "infix") return ltl::TextFormat::Infix;
  throw std::invalid_argument("format must be 'prefix' or 'infix'");
}

Word to_word(const std::vector<std::vector<std::string>>& letters) {
  Word w;
  for (const auto& l : letters) w.emplace_back(l.begin(), l.end());
  return w;
}

std::optional<Cell> to_cell(const std::optional<std::pair<int, int>>& c) {
  if (!c) return std::nullopt;
  return Cell{c->first, c->second};
}

py::list cells_to_list(const std::vector<Cell>& cells) {
  py::list out;
  for (const Cell& c : cells) out.append(py::make_tuple(c.x, c.y));
  return out;
}

py::dict outcome_dict(const PlanOutcome& o) {
  py::dict d;
  d["code"] = static_cast<int>(o.code);
  d["message"] = o.message;
  d["formula"] = o.code == ExitCode::Syntactic ? std::string() : ltl::to_prefix(o.formula);
  d["automaton_states"] = o.automaton_states;
  d["path"] = o.path ? cells_to_list(o.path->cells) : py::list();
  d["cost"] = o.path ? py::cast(o.path->cost) : py::none();
  d["expansions"] = o.path ? o.path->expansions : 0;
  d["attempts"] = o.translation ? o.translation->attempts : 0;
  d["grounded"] = o.translation ? py::cast(o.translation->grounded) : py::none();
  return d;
}

PromptTemplates templates_from(const std::optional<std::filesystem::path>& dir) {
  return PromptTemplates::load(dir ? *dir : default_prompt_dir());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "LTL task planning on semantic grid maps";

  static py::exception<ltl::ParseError> parse_error(m, "LtlParseError", PyExc_ValueError);
  static py::exception<DslError> dsl_error(m, "DslError", PyExc_ValueError);
  static py::exception<FormatError> format_error(m, "MapFormatError", PyExc_ValueError);
  static py::exception<NoPath> no_path(m, "NoPath", PyExc_RuntimeError);
  static py::exception<SyntacticFailure> syntactic(m, "SyntacticFailure", PyExc_RuntimeError);
  static py::exception<LlmUnavailable> llm_unavailable(m, "LlmUnavailable", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ltl::ParseError& e) {
      py::set_error(parse_error, e.what());
    } catch (const DslError& e) {
      py::set_error(dsl_error, e.what());
    } catch (const FormatError& e) {
      py::set_error(format_error, e.what());
    } catch (const IoError& e) {
      py::set_error(PyExc_OSError, e.what());
    } catch (const NoPath& e) {
      py::set_error(no_path, e.what());
    } catch (const SyntacticFailure& e) {
      py::set_error(syntactic, e.what());
    } catch (const LlmUnavailable& e) {
      py::set_error(llm_unavailable, e.what());
    }
  });

  m.def(
      "parse_formula",
      [](const std::string& text, const std::string& fmt) { return ltl::to_prefix(ltl::parse(text, text_format(fmt))); },
      py::arg("text"), py::arg("format") = "prefix", "Parse a formula and return it in prefix notation.");
  m.def(
      "to_infix", [](const std::string& prefix) { return ltl::to_infix(ltl::parse_prefix(prefix)); },
      py::arg("prefix"));
  m.def(
      "eval_finite",
      [](const std::string& text, const std::vector<std::vector<std::string>>& word, const std::string& fmt) {
        return ltl::eval_finite(ltl::parse(text, text_format(fmt)), to_word(word));
      },
      py::arg("formula"), py::arg("word"), py::arg("format") = "prefix");

  py::class_<TaskAutomaton>(m, "Automaton")
      .def_property_readonly("num_states", &TaskAutomaton::num_states)
      .def_property_readonly("propositions", &TaskAutomaton::propositions)
      .def("is_accepting", &TaskAutomaton::is_accepting)
      .def("state_formula", [](const TaskAutomaton& a, StateId q) { return ltl::to_prefix(a.state_formula(q)); })
      .def("step", [](const TaskAutomaton& a, StateId q, const std::vector<std::string>& l) {
        return a.step(q, Letter(l.begin(), l.end()));
      })
      .def("accepts", [](const TaskAutomaton& a, const std::vector<std::vector<std::string>>& w) {
        return accepts(a, to_word(w));
      })
      .def("to_dot", [](const TaskAutomaton& a) { return to_dot(a); });
  m.def(
      "compile",
      [](const std::string& text, const std::string& fmt) { return compile(ltl::parse(text, text_format(fmt))); },
      py::arg("formula"), py::arg("format") = "prefix", "Automaton over every letter of the formula's propositions.");

  py::class_<MapFile>(m, "Map")
      .def_property_readonly("width", [](const MapFile& mf) { return mf.grid.width(); })
      .def_property_readonly("height", [](const MapFile& mf) { return mf.grid.height(); })
      .def_property_readonly("resolution", [](const MapFile& mf) { return mf.grid.resolution(); })
      .def_property_readonly("start", [](const MapFile& mf) -> py::object {
        if (!mf.start) return py::none();
        return py::make_tuple(mf.start->x, mf.start->y);
      })
      .def_property_readonly("objects", [](const MapFile& mf) { return ObjectTable(mf.grid.classes()).ids(); })
      .def("class_at", [](const MapFile& mf, int x, int y) {
        const Cell c{x, y};
        if (!mf.grid.in_bounds(c)) throw py::index_error("cell outside the map");
        return mf.grid.classes()[mf.grid.at(c)].name;
      })
      .def("labels", [](const MapFile& mf, int x, int y) {
        const LabelGrid lg = build_label_grid(mf.grid);
        const Cell c{x, y};
        if (!lg.in_bounds(c)) throw py::index_error("cell outside the map");
        return lg.label(c);
      })
      .def("to_ascii", [](const MapFile& mf) { return write_ascii_map(mf); })
      .def("to_json", [](const MapFile& mf) { return write_json_map(mf); })
      .def("render_ascii", [](const MapFile& mf, const std::vector<std::pair<int, int>>& path) {
        std::vector<Cell> cells;
        for (const auto& [x, y] : path) cells.push_back({x, y});
        return render_ascii(mf.grid, cells);
      }, py::arg("path") = std::vector<std::pair<int, int>>{});

  m.def("load_map", &load_map, py::arg("path"));
  m.def(
      "parse_map", [](const std::string& text) { return parse_ascii_map(text); }, py::arg("text"));
  m.def(
      "project_voxels",
      [](const std::filesystem::path& path) { return MapFile{project(load_voxels(path)), std::nullopt, std::nullopt}; },
      py::arg("path"));

  m.def(
      "plan",
      [](const MapFile& map, const std::string& ltl_text, std::optional<std::pair<int, int>> start,
         std::optional<double> ro, bool use_heuristic, const std::string& fmt) {
        PlanRequest req;
        req.ltl = ltl_text;
        req.format = text_format(fmt);
        req.start = to_cell(start);
        req.safety_margin = ro;
        req.use_heuristic = use_heuristic;
        PlanOutcome out;
        {
          py::gil_scoped_release release;
          out = run_plan(map, req, nullptr, nullptr);
        }
        return outcome_dict(out);
      },
      py::arg("map"), py::arg("ltl"), py::arg("start") = py::none(), py::arg("ro") = py::none(),
      py::arg("use_heuristic") = true, py::arg("format") = "prefix",
      "Plan for a formula over object ids or class names. The result's 'code' is the CLI exit code.");

  m.def(
      "plan_instruction",
      [](const MapFile& map, const std::string& instruction, const std::filesystem::path& replay_dir,
         std::optional<std::pair<int, int>> start, std::optional<std::filesystem::path> prompts, int max_retries,
         bool fallback_grounding) {
        ReplayLlmClient llm(replay_dir);
        const PromptTemplates tpl = templates_from(prompts);
        PlanRequest req;
        req.instruction = instruction;
        req.start = to_cell(start);
        req.translate.max_retries = max_retries;
        req.translate.llm_grounding = !fallback_grounding;
        return outcome_dict(run_plan(map, req, &llm, &tpl));
      },
      py::arg("map"), py::arg("instruction"), py::arg("replay"), py::arg("start") = py::none(),
      py::arg("prompts") = py::none(), py::arg("max_retries") = 3, py::arg("fallback_grounding") = false,
      "Translate with recorded model responses, then plan.");

  m.def(
      "ground_fallback",
      [](const MapFile& map, const std::string& instruction) {
        const Grounding g = ground_fallback(instruction, ObjectTable(map.grid.classes()));
        return py::make_tuple(g.text, g.objects);
      },
      py::arg("map"), py::arg("instruction"));
  m.def(
      "build_prompt",
      [](const std::string& grounded, std::optional<std::string> previous, std::optional<std::string> reason,
         std::optional<std::filesystem::path> prompts) {
        return build_prompt(templates_from(prompts), grounded, previous, reason);
      },
      py::arg("grounded"), py::arg("previous_answer") = py::none(), py::arg("failure_reason") = py::none(),
      py::arg("prompts") = py::none());
  m.def(
      "dsl_to_formula", [](const std::string& code) { return ltl::to_prefix(eval_dsl(parse_dsl(code))); },
      py::arg("code"), "Run generated Python-style code in the closed formula grammar.");
  m.def(
      "formula_to_dsl", [](const std::string& prefix) { return formula_to_dsl(ltl::parse_prefix(prefix)); },
      py::arg("prefix"));
  m.def("prompt_hash", &prompt_hash, py::arg("prompt"));

  m.def(
      "evaluate_suite",
      [](const std::filesystem::path& suite, int jobs, bool use_heuristic) {
        const auto tasks = load_suite(std::filesystem::is_directory(suite) ? suite / "suite.json" : suite);
        EvalOptions opt;
        opt.jobs = jobs;
        opt.use_heuristic = use_heuristic;
        EvalReport r;
        {
          py::gil_scoped_release release;
          r = run_eval(tasks, nullptr, nullptr, opt);
        }
        py::dict d;
        d["accuracy"] = r.accuracy;
        d["mpl"] = r.mpl;
        d["no_path_rate"] = r.no_path_rate;
        d["syntactic_rate"] = r.syntactic_rate;
        d["semantic_rate"] = r.semantic_rate;
        py::list tasks_out;
        for (const auto& t : r.tasks) {
          tasks_out.append(py::dict(py::arg("name") = t.name, py::arg("outcome") = to_string(t.outcome),
                                    py::arg("path_length") = t.path_length, py::arg("message") = t.message));
        }
        d["tasks"] = tasks_out;
        return d;
      },
      py::arg("suite"), py::arg("jobs") = 1, py::arg("use_heuristic") = true,
      "Evaluate a suite of formula tasks (no model calls).");
}
