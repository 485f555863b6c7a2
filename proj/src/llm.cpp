#include "ltlnav/llm.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace ltlnav {

using nlohmann::json;

std::string prompt_hash(const std::string& prompt) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(prompt.data(), prompt.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

HttpLlmClient::HttpLlmClient(HttpLlmConfig config) : config_(std::move(config)) {
  const std::string& url = config_.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("endpoint must start with http:// or https://");
  const auto path_start = url.find('/', scheme_end + 3);
  host_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
}

std::string HttpLlmClient::complete(const std::string& prompt) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  httplib::Client client(host_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);

  const json body{{"model", config_.model},
                  {"temperature", config_.temperature},
                  {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};
  auto res = client.Post(path_ + "/chat/completions", headers, body.dump(), "application/json");
  if (!res) throw LlmUnavailable("request to " + config_.base_url + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw LlmUnavailable("endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  }
  std::string text;
  try {
    const json reply = json::parse(res->body);
    const json& content = reply.at("choices").at(0).at("message").at("content");
    if (content.is_string()) text = content.get<std::string>();
  } catch (const json::exception& e) {
    throw LlmUnavailable(std::string("malformed completion response: ") + e.what());
  }
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw EmptyResponse();
  return text;
}

std::vector<TranscriptRecord> load_transcript(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open transcript " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(file.string() + ": " + e.what());
  }
  std::vector<TranscriptRecord> out;
  for (const json& r : doc.at("records")) {
    TranscriptRecord rec;
    rec.prompt_hash = r.at("prompt_hash").get<std::string>();
    rec.response = r.at("response").get<std::string>();
    rec.prompt = r.value("prompt", "");
    out.push_back(std::move(rec));
  }
  return out;
}

void save_transcript(const std::filesystem::path& file, const std::vector<TranscriptRecord>& records) {
  json doc{{"records", json::array()}};
  for (const auto& r : records) {
    doc["records"].push_back({{"prompt_hash", r.prompt_hash}, {"prompt", r.prompt}, {"response", r.response}});
  }
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write transcript " + file.string());
  out << doc.dump(2) << '\n';
}

ReplayLlmClient::ReplayLlmClient(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("replay directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    for (auto& rec : load_transcript(f)) responses_[rec.prompt_hash].push_back(std::move(rec.response));
  }
}

std::string ReplayLlmClient::complete(const std::string& prompt) {
  const std::string key = prompt_hash(prompt);
  std::lock_guard lock(mutex_);
  auto it = responses_.find(key);
  if (it == responses_.end() || it->second.empty()) {
    throw LlmUnavailable("no recorded response for prompt " + key.substr(0, 12));
  }
  std::string text = std::move(it->second.front());
  it->second.pop_front();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw EmptyResponse();
  return text;
}

std::size_t ReplayLlmClient::remaining() const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (const auto& [k, q] : responses_) n += q.size();
  return n;
}

RecordingLlmClient::RecordingLlmClient(LlmClient& inner, std::filesystem::path file)
    : inner_(inner), file_(std::move(file)) {}

std::string RecordingLlmClient::complete(const std::string& prompt) {
  std::string text = inner_.complete(prompt);
  std::lock_guard lock(mutex_);
  records_.push_back({prompt_hash(prompt), text, prompt});
  save_transcript(file_, records_);
  return text;
}

ScriptedLlmClient::ScriptedLlmClient(std::vector<std::string> responses)
    : responses_(responses.begin(), responses.end()) {}

std::string ScriptedLlmClient::complete(const std::string& prompt) {
  prompts_.push_back(prompt);
  if (responses_.empty()) throw LlmUnavailable("scripted client has no responses left");
  std::string text = std::move(responses_.front());
  responses_.pop_front();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw EmptyResponse();
  return text;
}

}  // namespace ltlnav
