// Turns data/transcripts/cases.json into replayable transcripts: each case's
// scripted model answers are run through translate() and recorded with the
// exact prompts they answer.
//
//   make_transcripts <data dir> <output dir>
#include <iostream>
#include <json.hpp>

#include "ltlnav/codegen.hpp"
#include "ltlnav/map_io.hpp"

using namespace ltlnav;
using nlohmann::json;

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: make_transcripts <data dir> <output dir>\n";
    return 1;
  }
  const std::filesystem::path data = argv[1];
  const std::filesystem::path out = argv[2];
  const json cases = json::parse(read_text_file(data / "transcripts" / "cases.json"));
  const PromptTemplates templates = PromptTemplates::load(data / "prompts");
  std::filesystem::create_directories(out);

  for (const json& c : cases.at("cases")) {
    const std::string name = c.at("name").get<std::string>();
    const MapFile map = load_map(data / c.at("map").get<std::string>());
    const ObjectTable table(map.grid.classes());
    std::vector<std::string> replies{c.at("grounding_reply").get<std::string>()};
    for (const auto& a : c.at("answers")) replies.push_back(a.get<std::string>());

    ScriptedLlmClient scripted(replies);
    const auto file = out / (name + ".json");
    std::filesystem::remove(file);
    RecordingLlmClient recorder(scripted, file);
    try {
      const TranslationResult r = translate(c.at("instruction").get<std::string>(), table, recorder, templates);
      std::cout << name << ": " << ltl::to_prefix(r.formula) << " (" << r.attempts << " attempts)\n";
    } catch (const SyntacticFailure& e) {
      std::cout << name << ": " << e.what() << '\n';
    }
  }
  return 0;
}
