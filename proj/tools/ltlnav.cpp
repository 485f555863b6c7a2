// Command-line front end: project, plan, translate, eval, render, automaton-dump.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <memory>

#include "ltlnav/pipeline.hpp"

using namespace ltlnav;

namespace {

int exit_code(ExitCode c) { return static_cast<int>(c); }

std::optional<Cell> parse_cell(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--start", "expected x,y");
  try {
    return Cell{std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--start", "expected integer x,y");
  }
}

std::map<std::string, double> parse_radii(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--rc", "expected class=meters, got " + item);
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--rc", "bad number in " + item);
    }
  }
  return out;
}

struct LlmFlags {
  std::string endpoint;
  std::string model = "gpt-4o";
  std::string replay;
  std::string record;
  std::string prompts;
  int max_retries = 3;
  bool fallback_grounding = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--llm-endpoint", endpoint, "chat-completion base URL (key from OPENAI_API_KEY)");
    cmd->add_option("--llm-model", model, "model name")->capture_default_str();
    cmd->add_option("--replay", replay, "serve model answers from recorded transcripts in this directory");
    cmd->add_option("--record", record, "write the exchanged prompts and answers to this transcript file");
    cmd->add_option("--prompts", prompts, "prompt template directory");
    cmd->add_option("--max-retries", max_retries, "code-generation retries")->capture_default_str();
    cmd->add_flag("--fallback-grounding", fallback_grounding, "ground object names without the model");
  }

  // Null when no model source was configured.
  std::unique_ptr<LlmClient> make(std::unique_ptr<LlmClient>& base) const {
    if (!replay.empty()) {
      base = std::make_unique<ReplayLlmClient>(replay);
    } else if (!endpoint.empty()) {
      HttpLlmConfig config;
      config.base_url = endpoint;
      config.model = model;
      base = std::make_unique<HttpLlmClient>(config);
    } else {
      return nullptr;
    }
    if (!record.empty()) return std::make_unique<RecordingLlmClient>(*base, record);
    return nullptr;
  }

  PromptTemplates templates() const {
    return PromptTemplates::load(prompts.empty() ? default_prompt_dir() : std::filesystem::path(prompts));
  }

  TranslateOptions options() const {
    TranslateOptions o;
    o.max_retries = max_retries;
    o.llm_grounding = !fallback_grounding;
    return o;
  }
};

ltl::TextFormat parse_format(const std::string& s) {
  return s == "infix" ? ltl::TextFormat::Infix : ltl::TextFormat::Prefix;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Language-instructed navigation: temporal-logic planning on semantic grid maps"};
  app.require_subcommand(1);

  // project
  std::string voxel_path, project_out;
  auto* project_cmd = app.add_subcommand("project", "collapse a 3D voxel map into a 2D semantic grid");
  project_cmd->add_option("voxels", voxel_path, "voxel file (text or JSON)")->required();
  project_cmd->add_option("--out,-o", project_out, "output map (.json for JSON, otherwise ASCII)");

  // plan
  std::string map_path, instruction, ltl_text, start_text, format_text = "prefix", svg_path, out_path, dump_g;
  std::vector<std::string> rc_items;
  double ro = -1.0;
  bool ascii = false, no_heuristic = false;
  LlmFlags plan_llm;
  auto* plan_cmd = app.add_subcommand("plan", "plan a path for an instruction or formula");
  plan_cmd->add_option("--map", map_path, "semantic grid map")->required();
  auto* instr_opt = plan_cmd->add_option("--instruction", instruction, "natural-language task");
  auto* ltl_opt = plan_cmd->add_option("--ltl", ltl_text, "task formula over object ids or class names");
  instr_opt->excludes(ltl_opt);
  plan_cmd->add_option("--start", start_text, "start cell x,y (defaults to the map's start)");
  plan_cmd->add_option("--ro", ro, "safety margin in meters");
  plan_cmd->add_option("--rc", rc_items, "proposition radius override class=meters (repeatable)");
  plan_cmd->add_option("--format", format_text, "formula syntax")->check(CLI::IsMember({"prefix", "infix"}));
  plan_cmd->add_option("--svg", svg_path, "write an SVG rendering of the path");
  plan_cmd->add_option("--out,-o", out_path, "write the path record (JSON)");
  plan_cmd->add_option("--dump-g", dump_g, "write the heuristic's g-table as CSV");
  plan_cmd->add_flag("--ascii", ascii, "print the path over an ASCII map");
  plan_cmd->add_flag("--no-heuristic", no_heuristic, "plain uniform-cost search");
  plan_llm.add_to(plan_cmd);

  // translate
  std::string tr_map, tr_instruction, tr_format = "prefix";
  LlmFlags tr_llm;
  auto* tr_cmd = app.add_subcommand("translate", "turn an instruction into a formula");
  tr_cmd->add_option("--map", tr_map, "map whose classes define the object ids")->required();
  tr_cmd->add_option("--instruction", tr_instruction, "natural-language task")->required();
  tr_cmd->add_option("--format", tr_format, "output syntax")->check(CLI::IsMember({"prefix", "infix"}));
  tr_llm.add_to(tr_cmd);

  // eval
  std::string suite_path, csv_path;
  int jobs = 1;
  bool eval_no_heuristic = false;
  LlmFlags eval_llm;
  auto* eval_cmd = app.add_subcommand("eval", "run a task suite and report accuracy and path length");
  eval_cmd->add_option("suite", suite_path, "suite directory (with suite.json) or suite file")->required();
  eval_cmd->add_option("--csv", csv_path, "per-task CSV output");
  eval_cmd->add_option("--jobs,-j", jobs, "parallel tasks")->capture_default_str();
  eval_cmd->add_flag("--no-heuristic", eval_no_heuristic, "plain uniform-cost search");
  eval_llm.add_to(eval_cmd);

  // render
  std::string render_map, render_path, render_svg_out;
  auto* render_cmd = app.add_subcommand("render", "draw a map and optionally a planned path");
  render_cmd->add_option("--map", render_map, "semantic grid map")->required();
  render_cmd->add_option("--path", render_path, "path record written by plan --out");
  render_cmd->add_option("--svg", render_svg_out, "SVG output (ASCII to stdout otherwise)");

  // automaton-dump
  std::string dump_ltl, dump_format = "prefix", dump_map;
  auto* dump_cmd = app.add_subcommand("automaton-dump", "print the task automaton of a formula as DOT");
  dump_cmd->add_option("--ltl", dump_ltl, "formula")->required();
  dump_cmd->add_option("--format", dump_format, "formula syntax")->check(CLI::IsMember({"prefix", "infix"}));
  dump_cmd->add_option("--map", dump_map, "restrict the alphabet to this map's label sets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*project_cmd) {
      const VoxelMap v = load_voxels(voxel_path);
      MapFile m{project(v), std::nullopt, std::nullopt};
      if (project_out.empty()) {
        std::cout << write_ascii_map(m);
      } else {
        save_map(m, project_out);
      }
      return 0;
    }

    if (*plan_cmd) {
      const MapFile map = load_map(map_path);
      PlanRequest req;
      if (*ltl_opt) req.ltl = ltl_text;
      if (*instr_opt) req.instruction = instruction;
      req.format = parse_format(format_text);
      req.start = parse_cell(start_text);
      if (ro >= 0) req.safety_margin = ro;
      req.radii = parse_radii(rc_items);
      req.use_heuristic = !no_heuristic;
      req.translate = plan_llm.options();

      std::unique_ptr<LlmClient> base;
      std::unique_ptr<LlmClient> recorder;
      std::optional<PromptTemplates> templates;
      LlmClient* llm = nullptr;
      if (req.instruction) {
        recorder = plan_llm.make(base);
        llm = recorder ? recorder.get() : base.get();
        templates = plan_llm.templates();
      }
      const PlanOutcome out = run_plan(map, req, llm, templates ? &*templates : nullptr);

      if (out.translation) {
        std::cerr << "grounded: " << out.translation->grounded << '\n';
        for (const auto& w : out.translation->warnings) std::cerr << "warning: " << w << '\n';
      }
      if (!dump_g.empty() && (out.code == ExitCode::Success || out.code == ExitCode::NoPath)) {
        const LabelGrid lg = build_label_grid(map.grid, req.radii);
        const TaskAutomaton a = compile(out.formula, lg.label_sets());
        const LtlHeuristic h(a, lg);
        write_text_file(dump_g, g_table_csv(h.g(), h.sets()));
      }
      if (!out_path.empty()) write_text_file(out_path, path_record_json(map, out, map_path));
      if (out.code != ExitCode::Success) {
        std::cerr << "error: " << out.message << '\n';
        return exit_code(out.code);
      }
      if (!svg_path.empty()) write_text_file(svg_path, render_svg(map.grid, out.path->cells));
      if (ascii) std::cout << render_ascii(map.grid, out.path->cells);
      std::printf("formula=%s cost=%.6f steps=%zu expansions=%zu states=%zu attempts=%d\n",
                  ltl::to_prefix(out.formula).c_str(), out.path->cost, out.path->cells.size(),
                  out.path->expansions, out.automaton_states, out.translation ? out.translation->attempts : 0);
      return 0;
    }

    if (*tr_cmd) {
      const MapFile map = load_map(tr_map);
      std::unique_ptr<LlmClient> base;
      auto recorder = tr_llm.make(base);
      LlmClient* llm = recorder ? recorder.get() : base.get();
      if (!llm) {
        std::cerr << "error: --replay or --llm-endpoint is required\n";
        return exit_code(ExitCode::Failure);
      }
      const ObjectTable table(map.grid.classes());
      try {
        const TranslationResult r = translate(tr_instruction, table, *llm, tr_llm.templates(), tr_llm.options());
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
        std::cout << "grounded: " << r.grounded << '\n';
        std::cout << "attempts: " << r.attempts << '\n';
        std::cout << "formula:  " << ltl::to_text(r.formula, parse_format(tr_format)) << '\n';
      } catch (const SyntacticFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(ExitCode::Syntactic);
      }
      return 0;
    }

    if (*eval_cmd) {
      std::filesystem::path suite = suite_path;
      if (std::filesystem::is_directory(suite)) suite /= "suite.json";
      const auto tasks = load_suite(suite);
      std::unique_ptr<LlmClient> base;
      auto recorder = eval_llm.make(base);
      LlmClient* llm = recorder ? recorder.get() : base.get();
      std::optional<PromptTemplates> templates;
      if (llm) templates = eval_llm.templates();
      EvalOptions options;
      options.jobs = jobs;
      options.use_heuristic = !eval_no_heuristic;
      options.translate = eval_llm.options();
      const EvalReport report = run_eval(tasks, llm, templates ? &*templates : nullptr, options);
      if (!csv_path.empty()) write_text_file(csv_path, eval_csv(report));
      std::cout << eval_summary(report);
      return 0;
    }

    if (*render_cmd) {
      const MapFile map = load_map(render_map);
      std::vector<Cell> cells;
      if (!render_path.empty()) cells = parse_path_record(read_text_file(render_path)).cells;
      for (const Cell& c : cells) {
        if (!map.grid.in_bounds(c)) throw OutOfBounds(c);
      }
      if (render_svg_out.empty()) {
        std::cout << render_ascii(map.grid, cells);
      } else {
        write_text_file(render_svg_out, render_svg(map.grid, cells));
      }
      return 0;
    }

    if (*dump_cmd) {
      ltl::Formula f;
      try {
        f = ltl::parse(dump_ltl, parse_format(dump_format));
      } catch (const ltl::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(ExitCode::Syntactic);
      }
      if (dump_map.empty()) {
        std::cout << to_dot(compile(f));
      } else {
        const MapFile map = load_map(dump_map);
        const ObjectTable table(map.grid.classes());
        const LabelGrid lg = build_label_grid(map.grid);
        std::cout << to_dot(compile(to_class_names(f, table), lg.label_sets()));
      }
      return 0;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(ExitCode::Io);
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(ExitCode::Io);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(ExitCode::Failure);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(ExitCode::Failure);
  }
  return 0;
}
