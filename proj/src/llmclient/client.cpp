#include "molgen/llmclient/client.hpp"

#include <cmath>
#include <ctime>
#include <thread>

#include <nlohmann/json.hpp>

#include "molgen/hash.hpp"
#include "molgen/rng.hpp"

namespace molgen::llm {

std::string record_to_json(const ReplayRecord& r) {
  nlohmann::json j;
  j["prompt_sha256"] = r.prompt_sha256;
  j["raw_response"] = r.raw_response ? nlohmann::json(*r.raw_response) : nlohmann::json(nullptr);
  j["provider_id"] = r.provider_id;
  j["timestamp"] = r.timestamp;
  j["attempt"] = r.attempt;
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump();
}

ReplayRecord record_from_json(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    ReplayRecord r;
    r.prompt_sha256 = j.at("prompt_sha256").get<std::string>();
    if (!j.at("raw_response").is_null()) r.raw_response = j["raw_response"].get<std::string>();
    r.provider_id = j.at("provider_id").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.attempt = j.value("attempt", 1);
    r.error = j.value("error", std::string());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed replay record: ") + e.what());
  }
}

std::vector<ReplayRecord> read_replay_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("replay log not found: " + path.string());
  std::vector<ReplayRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(line));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

ReplayLog::ReplayLog(const std::filesystem::path& path) : out_(path, std::ios::app) {
  if (!out_) throw DataError("cannot open replay log for writing: " + path.string());
}

void ReplayLog::append(const ReplayRecord& record) {
  const std::string line = record_to_json(record) + "\n";
  std::lock_guard lock(mutex_);
  out_ << line;
  out_.flush();
  ++appended_;
}

std::size_t ReplayLog::appended() const {
  std::lock_guard lock(mutex_);
  return appended_;
}

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry, double u) {
  const double ms = static_cast<double>(policy.base.count()) * std::pow(policy.factor, retry) *
                    (1.0 + policy.jitter * u);
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(ms)));
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

LlmClient::LlmClient(LlmProvider& provider, RetryPolicy policy, ReplayLog* log, Sleeper sleeper, Clock clock)
    : provider_(provider),
      policy_(policy),
      log_(log),
      sleeper_(sleeper ? std::move(sleeper) : Sleeper([](auto d) { std::this_thread::sleep_for(d); })),
      clock_(clock ? std::move(clock) : Clock(utc_timestamp)) {
  if (policy_.max_retries < 0) throw ConfigError("max_retries must be non-negative");
}

QueryResult LlmClient::attempt_all(const std::string& prompt) {
  const std::string sha = sha256_hex(prompt);
  Rng jitter(fnv1a64(sha));
  QueryResult result;
  auto record = [&](std::optional<std::string> raw, const std::string& error) {
    if (log_) log_->append({sha, std::move(raw), provider_.id(), clock_(), result.attempts, error});
  };
  for (int retry = 0;; ++retry) {
    ++result.attempts;
    ++requests_;
    try {
      std::string raw = provider_.complete(prompt);
      record(raw, "");
      result.raw = std::move(raw);
      result.error = nullptr;
      return result;
    } catch (const TransientProviderError& e) {
      record(std::nullopt, e.what());
      if (retry >= policy_.max_retries) {
        result.error = std::make_exception_ptr(TransientProviderError(
            "provider " + provider_.id() + " failed after " + std::to_string(result.attempts) +
            " attempts: " + e.what()));
        return result;
      }
      sleeper_(backoff_delay(policy_, retry, jitter.uniform01()));
    } catch (const ProviderError& e) {
      // Credentials, refused network, missing replay entries: retrying cannot help.
      record(std::nullopt, e.what());
      result.error = std::current_exception();
      return result;
    }
  }
}

std::string LlmClient::query(const std::string& rendered_prompt) {
  QueryResult r = attempt_all(rendered_prompt);
  if (!r.raw) std::rethrow_exception(r.error);
  return *r.raw;
}

std::vector<QueryResult> LlmClient::query_all(const std::vector<std::string>& prompts, std::size_t concurrency) {
  if (concurrency == 0) throw ConfigError("concurrency limit must be positive");
  std::vector<QueryResult> results(prompts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < prompts.size(); i = next++) {
      try {
        results[i] = attempt_all(prompts[i]);
      } catch (...) {
        results[i].error = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min(concurrency, prompts.size());
  std::vector<std::jthread> threads;
  for (std::size_t t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  threads.clear();
  return results;
}

}  // namespace molgen::llm
