#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "molgen/llmclient/provider.hpp"
#include "molgen/prompting/prompt.hpp"

namespace molgen::llm {

// One line of the replay log. Failed attempts are recorded with no response
// and the error message.
struct ReplayRecord {
  std::string prompt_sha256;
  std::optional<std::string> raw_response;
  std::string provider_id;
  std::string timestamp;  // ISO-8601 UTC
  int attempt = 1;
  std::string error;
};

std::string record_to_json(const ReplayRecord& r);
ReplayRecord record_from_json(const std::string& line);  // DataError when malformed
std::vector<ReplayRecord> read_replay_log(const std::filesystem::path& path);

// Append-only JSONL writer. Appends from concurrent queries are serialized.
class ReplayLog {
 public:
  explicit ReplayLog(const std::filesystem::path& path);
  void append(const ReplayRecord& record);
  std::size_t appended() const;

 private:
  mutable std::mutex mutex_;
  std::ofstream out_;
  std::size_t appended_ = 0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;
using Clock = std::function<std::string()>;

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base{1000};
  double factor = 2.0;
  double jitter = 0.25;  // each delay is scaled by a factor drawn from [1, 1 + jitter)
};

// Delay before retry number `retry` (0-based), jitter drawn from `u` in [0, 1).
std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry, double u);

std::string utc_timestamp();

struct QueryResult {
  std::optional<std::string> raw;  // empty when every attempt failed
  int attempts = 0;
  std::exception_ptr error;        // last failure when raw is empty
};

// Retrying front end over a provider. Transient failures are retried with
// exponential backoff; credential and other provider errors are not. The
// backoff jitter is seeded from the prompt hash, so a query's delays do not
// depend on scheduling.
class LlmClient {
 public:
  LlmClient(LlmProvider& provider, RetryPolicy policy, ReplayLog* log = nullptr, Sleeper sleeper = {},
            Clock clock = {});

  // Raw response text. Throws TransientProviderError after the last retry.
  std::string query(const std::string& rendered_prompt);
  std::string query(const prompting::AugmentedPrompt& prompt) { return query(prompt.rendered); }

  // Runs every prompt with at most `concurrency` requests in flight. Results
  // come back in input order; failures are captured rather than thrown.
  std::vector<QueryResult> query_all(const std::vector<std::string>& prompts, std::size_t concurrency = 4);

  std::size_t requests() const { return requests_.load(); }
  const LlmProvider& provider() const { return provider_; }

 private:
  QueryResult attempt_all(const std::string& prompt);

  LlmProvider& provider_;
  RetryPolicy policy_;
  ReplayLog* log_;
  Sleeper sleeper_;
  Clock clock_;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace molgen::llm
