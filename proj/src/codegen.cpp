#include "ltlnav/codegen.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <regex>

#include "ltlnav/map_io.hpp"

#ifndef LTLNAV_DATA_DIR
#define LTLNAV_DATA_DIR "data"
#endif

namespace ltlnav {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

int id_number(const std::string& id) {
  const auto us = id.rfind('_');
  if (us == std::string::npos) return -1;
  try {
    return std::stoi(id.substr(us + 1));
  } catch (const std::exception&) {
    return -1;
  }
}

const std::regex& object_id_pattern() {
  static const std::regex re(R"(\bobject_\d+\b)");
  return re;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ObjectTable::ObjectTable(const ClassTable& classes) {
  for (std::size_t i = kFirstObjectClass; i < classes.size(); ++i) {
    const ClassInfo& info = classes[static_cast<ClassId>(i)];
    add(info.name, info.object_id, info.aliases);
  }
}

void ObjectTable::add(const std::string& name, const std::string& id, const std::vector<std::string>& aliases) {
  if (by_id_.count(id)) throw std::invalid_argument("duplicate object id " + id);
  if (by_name_.count(name)) throw std::invalid_argument("duplicate class name " + name);
  by_id_[id] = name;
  by_name_[name] = id;
  // class names are identifiers; "teddy_bear" also matches "teddy bear"
  std::string spoken = name;
  std::replace(spoken.begin(), spoken.end(), '_', ' ');
  forms_.emplace_back(spoken, id);
  for (const auto& a : aliases) forms_.emplace_back(a, id);
}

std::optional<std::string> ObjectTable::id_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> ObjectTable::name_of(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::string ObjectTable::correspondence_text() const {
  std::vector<std::pair<std::string, std::string>> rows(by_id_.begin(), by_id_.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    const int na = id_number(a.first);
    const int nb = id_number(b.first);
    return na != nb ? na < nb : a.first < b.first;
  });
  std::string out;
  for (const auto& [id, name] : rows) {
    std::string spoken = name;
    std::replace(spoken.begin(), spoken.end(), '_', ' ');
    if (!out.empty()) out += '\n';
    out += "    '" + id + "' : '" + spoken + "'";
  }
  return out;
}

Grounding ground_fallback(const std::string& instruction, const ObjectTable& table) {
  auto forms = table.surface_forms();
  std::stable_sort(forms.begin(), forms.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  const std::string lowered = lower(instruction);
  std::vector<std::pair<std::string, std::string>> lowered_forms;
  for (const auto& [form, id] : forms) lowered_forms.emplace_back(lower(form), id);

  Grounding out;
  std::size_t i = 0;
  while (i < instruction.size()) {
    const bool boundary = i == 0 || !word_char(instruction[i - 1]);
    bool matched = false;
    if (boundary) {
      for (const auto& [form, id] : lowered_forms) {
        if (form.empty() || lowered.compare(i, form.size(), form) != 0) continue;
        const std::size_t end = i + form.size();
        if (end < instruction.size() && word_char(instruction[end])) continue;
        out.text += id;
        i = end;
        matched = true;
        break;
      }
    }
    if (!matched) out.text += instruction[i++];
  }
  for (std::sregex_iterator it(out.text.begin(), out.text.end(), object_id_pattern()), end; it != end; ++it) {
    const std::string id = it->str();
    if (table.has_id(id)) {
      out.objects.insert(id);
    } else {
      out.warnings.push_back("unknown object id " + id + " ignored");
    }
  }
  return out;
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  PromptTemplates t;
  t.grounding = read_text_file(dir / "grounding.txt");
  t.header = read_text_file(dir / "header.txt");
  t.examples = read_text_file(dir / "examples.txt");
  t.question = read_text_file(dir / "question.txt");
  return t;
}

std::filesystem::path default_prompt_dir() {
  if (const char* env = std::getenv("LTLNAV_DATA_DIR"); env && *env) return std::filesystem::path(env) / "prompts";
  return std::filesystem::path(LTLNAV_DATA_DIR) / "prompts";
}

std::string build_grounding_prompt(const PromptTemplates& t, const std::string& instruction, const ObjectTable& table) {
  std::string prompt = t.grounding;
  replace_all(prompt, "{object ids}", table.correspondence_text());
  replace_all(prompt, "{natural language instruction}", instruction);
  return prompt;
}

Grounding ground(const std::string& instruction, const ObjectTable& table, LlmClient& llm,
                 const PromptTemplates& templates) {
  if (table.empty()) throw std::invalid_argument("the map has no object classes to ground against");
  std::string reply = llm.complete(build_grounding_prompt(templates, instruction, table));
  const std::string marker = "Output text:";
  if (auto pos = reply.rfind(marker); pos != std::string::npos) reply = reply.substr(pos + marker.size());
  reply = trim(reply);
  if (auto nl = reply.find('\n'); nl != std::string::npos) reply = trim(reply.substr(0, nl));
  if (reply.empty()) throw EmptyResponse();

  Grounding out;
  out.text = reply;
  for (std::sregex_iterator it(reply.begin(), reply.end(), object_id_pattern()), end; it != end; ++it) {
    const std::string id = it->str();
    if (table.has_id(id)) {
      out.objects.insert(id);
    } else {
      out.warnings.push_back("grounding produced unknown object id " + id + "; dropped");
    }
  }
  return out;
}

std::string build_prompt(const PromptTemplates& t, const std::string& grounded,
                         const std::optional<std::string>& previous_answer,
                         const std::optional<std::string>& failure_reason) {
  std::string question = t.question;
  replace_all(question, "{instruction}", grounded);
  replace_all(question, "{previous_answer}",
              previous_answer ? "\n# previous answer:\n" + *previous_answer : std::string());
  replace_all(question, "{failure_reason}", failure_reason ? "\n# failure reason:\n" + *failure_reason : std::string());
  std::string prompt = t.header;
  if (!prompt.empty() && prompt.back() != '\n') prompt += '\n';
  prompt += '\n';
  prompt += t.examples;
  if (!prompt.empty() && prompt.back() != '\n') prompt += '\n';
  prompt += '\n';
  prompt += question;
  return prompt;
}

SyntacticFailure::SyntacticFailure(int attempts, std::vector<AttemptRecord> history)
    : std::runtime_error("no valid formula after " + std::to_string(attempts) + " attempts" +
                         (history.empty() ? std::string() : ": " + history.back().error)),
      attempts_(attempts),
      history_(std::move(history)) {}

ltl::Formula check_answer(const std::string& code, const ObjectTable& table) {
  const DslProgram program = parse_dsl(code);
  ltl::Formula f = eval_dsl(program);
  for (const auto& p : ltl::atomic_props(f)) {
    if (!table.has_id(p)) {
      throw DslError(DslError::Kind::UnknownObject, 0, 0,
                     "UnknownObject: '" + p + "' is not one of the object ids in the correspondence list");
    }
  }
  return f;
}

TranslationResult translate(const std::string& instruction, const ObjectTable& table, LlmClient& llm,
                            const PromptTemplates& templates, const TranslateOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  TranslationResult result;
  Grounding g = options.llm_grounding ? ground(instruction, table, llm, templates) : ground_fallback(instruction, table);
  result.grounded = g.text;
  result.objects = g.objects;
  result.warnings = g.warnings;

  std::optional<std::string> previous;
  std::optional<std::string> reason;
  const int budget = options.max_retries + 1;
  for (int attempt = 1; attempt <= budget; ++attempt) {
    const std::string code = llm.complete(build_prompt(templates, result.grounded, previous, reason));
    result.attempts = attempt;
    try {
      result.formula = check_answer(code, table);
      result.history.push_back({code, ""});
      result.runtime = std::chrono::steady_clock::now() - start;
      return result;
    } catch (const DslError& e) {
      result.history.push_back({code, e.what()});
      previous = trim(code);
      reason = e.what();
    }
  }
  throw SyntacticFailure(result.attempts, std::move(result.history));
}

}  // namespace ltlnav
