#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltlnav/codegen.hpp"
#include "ltlnav/map_io.hpp"
#include "ltlnav/planner.hpp"

namespace ltlnav {

/// Process exit codes shared by every command.
enum class ExitCode : int { Success = 0, Failure = 1, NoPath = 2, Syntactic = 3, Io = 4 };

struct PlanRequest {
  std::optional<std::string> instruction;
  std::optional<std::string> ltl;  // bypasses translation
  ltl::TextFormat format = ltl::TextFormat::Prefix;
  std::optional<Cell> start;  // falls back to the map's start
  std::optional<double> safety_margin;
  std::map<std::string, double> radii;  // r_c overrides by class name
  bool use_heuristic = true;
  TranslateOptions translate;
};

struct PlanOutcome {
  ExitCode code = ExitCode::Failure;
  std::string message;
  std::optional<TranslationResult> translation;
  ltl::Formula formula;  // over class names, as planned
  std::optional<ProductPath> path;
  Cell start;
  std::size_t automaton_states = 0;
  double plan_seconds = 0.0;
  double llm_seconds = 0.0;
};

/// Replaces object ids with class names. Class names pass through; any other
/// proposition throws std::invalid_argument.
ltl::Formula to_class_names(const ltl::Formula& f, const ObjectTable& table);

/// Translate (or parse), compile over the map's label sets, plan and verify.
/// Errors are reported through the outcome, never thrown. `llm` and
/// `templates` are needed only when the request has an instruction.
PlanOutcome run_plan(const MapFile& map, const PlanRequest& request, LlmClient* llm,
                     const PromptTemplates* templates);

/// JSON record of a finished plan, readable by `render`.
std::string path_record_json(const MapFile& map, const PlanOutcome& outcome, const std::string& map_path);

struct PathRecord {
  std::string map_path;
  std::vector<Cell> cells;
  double cost = 0.0;
  std::string formula;
};
PathRecord parse_path_record(const std::string& json_text);

/// Multi-objective instruction: "Complete a, then complete b, and then c."
std::string compose_instruction(const std::vector<std::string>& objectives);

struct Objective {
  std::string name;
  Cell cell;
};

struct EvalTask {
  std::string name;
  std::filesystem::path map;
  std::optional<Cell> start;
  std::optional<std::string> ltl;
  std::optional<std::string> instruction;
  std::vector<Objective> objectives;
  std::map<std::string, double> radii;
  std::optional<double> safety_margin;
};

/// suite.json: {"tasks": [{"name", "map", "start", "ltl" | "instruction",
/// "objectives": [{"name", "cell": [x, y]}], "rc": {...}, "ro"}]}. Map
/// paths are relative to the suite file.
std::vector<EvalTask> load_suite(const std::filesystem::path& suite_file);

enum class TaskOutcome { Success, SemanticFailure, SyntacticFailure, NoPath, Error };
const char* to_string(TaskOutcome o);

struct TaskResult {
  std::string name;
  TaskOutcome outcome = TaskOutcome::Error;
  double path_length = 0.0;
  double cost = 0.0;
  std::size_t expansions = 0;
  int attempts = 0;
  double llm_seconds = 0.0;
  double plan_seconds = 0.0;
  std::string formula;
  std::string message;
};

struct EvalReport {
  std::vector<TaskResult> tasks;
  double accuracy = 0.0;  // percent of tasks scored Success
  double mpl = 0.0;       // mean path length over successful tasks
  double semantic_rate = 0.0;
  double syntactic_rate = 0.0;
  double no_path_rate = 0.0;
  double llm_runtime_mean = 0.0;
  double llm_runtime_std = 0.0;
};

/// Success means every objective cell appears on the path, in order.
bool objectives_reached(const std::vector<Cell>& path, const std::vector<Objective>& objectives);

struct EvalOptions {
  int jobs = 1;
  bool use_heuristic = true;
  TranslateOptions translate;
};

EvalReport run_eval(const std::vector<EvalTask>& tasks, LlmClient* llm, const PromptTemplates* templates,
                    const EvalOptions& options = {});
EvalReport summarize(std::vector<TaskResult> tasks);
std::string eval_csv(const EvalReport& report);
std::string eval_summary(const EvalReport& report);

/// Map rendering with an optional path on top.
std::string render_svg(const SemanticGrid& g, const std::vector<Cell>& path, double cell_pixels = 16.0);
std::string render_ascii(const SemanticGrid& g, const std::vector<Cell>& path);

}  // namespace ltlnav
