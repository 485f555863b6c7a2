#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltlnav/dsl.hpp"
#include "ltlnav/llm.hpp"
#include "ltlnav/semmap.hpp"

namespace ltlnav {

/// Map classes and their object_<k> ids, both directions.
class ObjectTable {
 public:
  ObjectTable() = default;
  explicit ObjectTable(const ClassTable& classes);

  /// Adds a class; aliases are extra surface forms for the fallback grounder.
  void add(const std::string& name, const std::string& id, const std::vector<std::string>& aliases = {});

  bool empty() const { return by_id_.empty(); }
  std::size_t size() const { return by_id_.size(); }
  std::optional<std::string> id_of(const std::string& name) const;
  std::optional<std::string> name_of(const std::string& id) const;
  bool has_id(const std::string& id) const { return by_id_.count(id) != 0; }
  const std::map<std::string, std::string>& ids() const { return by_id_; }  // id -> name
  /// (surface form, id) pairs: class names plus aliases.
  const std::vector<std::pair<std::string, std::string>>& surface_forms() const { return forms_; }

  /// Correspondence block as shown to the model, ordered by numeric id:
  ///     'object_28' : 'refrigerator'
  std::string correspondence_text() const;

 private:
  std::map<std::string, std::string> by_id_;
  std::map<std::string, std::string> by_name_;
  std::vector<std::pair<std::string, std::string>> forms_;
};

struct Grounding {
  std::string text;
  std::set<std::string> objects;  // C_mu: ids present in text and in the table
  std::vector<std::string> warnings;
};

/// Deterministic grounder: case-insensitive, longest surface form first,
/// matched on word boundaries. Text already in id form is left unchanged.
Grounding ground_fallback(const std::string& instruction, const ObjectTable& table);

struct PromptTemplates {
  std::string grounding;  // slots {object ids}, {natural language instruction}
  std::string header;
  std::string examples;
  std::string question;  // slots {instruction}{previous_answer}{failure_reason}

  static PromptTemplates load(const std::filesystem::path& dir);
};

/// Directory holding the bundled prompt templates.
std::filesystem::path default_prompt_dir();

std::string build_grounding_prompt(const PromptTemplates& t, const std::string& instruction, const ObjectTable& table);

/// Model-based grounding. Ids in the reply that are not in the table are
/// dropped from C_mu and reported in warnings.
Grounding ground(const std::string& instruction, const ObjectTable& table, LlmClient& llm,
                 const PromptTemplates& templates);

/// Header, examples and the question block with slots filled. A retry puts
/// the previous code and the error under "# previous answer:" and
/// "# failure reason:" labels.
std::string build_prompt(const PromptTemplates& t, const std::string& grounded,
                         const std::optional<std::string>& previous_answer = std::nullopt,
                         const std::optional<std::string>& failure_reason = std::nullopt);

struct AttemptRecord {
  std::string code;
  std::string error;  // empty on success
};

struct TranslationResult {
  ltl::Formula formula;
  std::string grounded;
  std::set<std::string> objects;
  int attempts = 0;
  std::vector<AttemptRecord> history;
  std::vector<std::string> warnings;
  std::chrono::duration<double> runtime{0};
};

class SyntacticFailure : public std::runtime_error {
 public:
  SyntacticFailure(int attempts, std::vector<AttemptRecord> history);
  int attempts() const { return attempts_; }
  const std::vector<AttemptRecord>& history() const { return history_; }

 private:
  int attempts_;
  std::vector<AttemptRecord> history_;
};

struct TranslateOptions {
  int max_retries = 3;
  bool llm_grounding = true;  // false: use ground_fallback
};

/// Checks a model answer: parse, evaluate, and require every proposition to
/// be a known id. Throws DslError.
ltl::Formula check_answer(const std::string& code, const ObjectTable& table);

/// Ground, then ask for code until it yields a formula over known ids or the
/// retry budget runs out.
TranslationResult translate(const std::string& instruction, const ObjectTable& table, LlmClient& llm,
                            const PromptTemplates& templates, const TranslateOptions& options = {});

}  // namespace ltlnav
