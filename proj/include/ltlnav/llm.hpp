#pragma once

#include <chrono>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltlnav {

class LlmUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyResponse : public std::runtime_error {
 public:
  EmptyResponse() : std::runtime_error("the language model returned an empty response") {}
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  /// One single-turn completion. Throws LlmUnavailable on transport or
  /// protocol failure.
  virtual std::string complete(const std::string& prompt) = 0;
};

/// Lowercase hex SHA-256 of the prompt bytes.
std::string prompt_hash(const std::string& prompt);

struct HttpLlmConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4o";
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 0.0;
  std::chrono::seconds timeout{60};
};

/// OpenAI-compatible chat completion endpoint (POST {base_url}/chat/completions).
class HttpLlmClient : public LlmClient {
 public:
  explicit HttpLlmClient(HttpLlmConfig config);
  std::string complete(const std::string& prompt) override;

 private:
  HttpLlmConfig config_;
  std::string host_;  // scheme://host[:port]
  std::string path_;  // path prefix, no trailing slash
};

struct TranscriptRecord {
  std::string prompt_hash;
  std::string response;
  std::string prompt;  // kept for readability, optional when loading
};

std::vector<TranscriptRecord> load_transcript(const std::filesystem::path& file);
void save_transcript(const std::filesystem::path& file, const std::vector<TranscriptRecord>& records);

/// Serves recorded responses keyed by prompt hash. Every *.json file in the
/// directory is loaded in name order; repeated hashes are served first in,
/// first out. Safe to share between threads.
class ReplayLlmClient : public LlmClient {
 public:
  explicit ReplayLlmClient(const std::filesystem::path& dir);
  std::string complete(const std::string& prompt) override;
  std::size_t remaining() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::deque<std::string>> responses_;
};

/// Forwards to another client and rewrites `file` after every exchange.
class RecordingLlmClient : public LlmClient {
 public:
  RecordingLlmClient(LlmClient& inner, std::filesystem::path file);
  std::string complete(const std::string& prompt) override;
  const std::vector<TranscriptRecord>& records() const { return records_; }

 private:
  LlmClient& inner_;
  std::filesystem::path file_;
  std::mutex mutex_;
  std::vector<TranscriptRecord> records_;
};

/// Returns canned responses in order regardless of the prompt.
class ScriptedLlmClient : public LlmClient {
 public:
  explicit ScriptedLlmClient(std::vector<std::string> responses);
  std::string complete(const std::string& prompt) override;
  const std::vector<std::string>& prompts() const { return prompts_; }

 private:
  std::deque<std::string> responses_;
  std::vector<std::string> prompts_;
};

}  // namespace ltlnav
