#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "molgen/error.hpp"
#include "molgen/llmclient/adapters.hpp"
#include "molgen/prompting/sampling.hpp"

namespace molgen::llm {

struct ProviderConfig {
  std::string endpoint;  // full URL of the completion endpoint
  std::string adapter = "openai-chat";
  std::string model;
  std::chrono::milliseconds timeout{60000};
  int max_retries = 3;
  double temperature = 0.0;
  std::string credential_env;  // name of the environment variable, never its value
};

// Safe to log: names the credential variable but never reads it.
std::string describe(const ProviderConfig& cfg);

// One text-in, text-out attempt. Implementations must be safe to call from
// several threads at once.
class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  virtual std::string id() const = 0;
  virtual std::string complete(const std::string& prompt) = 0;
};

// Returns the same text for every prompt.
class CannedProvider final : public LlmProvider {
 public:
  explicit CannedProvider(std::string text, std::string id = "canned")
      : text_(std::move(text)), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  std::string complete(const std::string&) override { return text_; }

 private:
  std::string text_;
  std::string id_;
};

// Offline stand-in for a real LLM. Reads the demonstrations back out of the
// rendered prompt and answers with them: for text2mol the demonstration SMILES
// ranked nearest-the-query first, for mol2text the description of the closest
// demonstration. Deterministic, so the whole pipeline runs without a network.
class EchoDemonstrationProvider final : public LlmProvider {
 public:
  explicit EchoDemonstrationProvider(std::size_t top_r = 4) : top_r_(top_r) {}
  std::string id() const override { return "echo-demonstration"; }
  std::string complete(const std::string& prompt) override;

 private:
  std::size_t top_r_;
};

// Serves responses from a replay log, keyed by the SHA-256 of the prompt.
// Never touches the network. A prompt missing from the log is a
// ProviderError. When a prompt was recorded several times the last
// successful response wins.
class ReplayProvider final : public LlmProvider {
 public:
  explicit ReplayProvider(const std::filesystem::path& log);
  std::string id() const override { return "replay"; }
  std::string complete(const std::string& prompt) override;
  std::size_t size() const { return responses_.size(); }

 private:
  std::map<std::string, std::string> responses_;
};

// Live endpoint. The credential is read from the environment at construction
// so a missing key fails before any request is sent.
class HttpProvider final : public LlmProvider {
 public:
  explicit HttpProvider(ProviderConfig cfg);
  std::string id() const override;
  std::string complete(const std::string& prompt) override;

 private:
  ProviderConfig cfg_;
  const Adapter* adapter_;
  std::string credential_;
};

// Hosted text-embedding service behind the same interface as the offline
// TF-IDF embedder. Uses the "embeddings" adapter shape.
class HttpTextEmbedder final : public prompting::TextEmbedder {
 public:
  HttpTextEmbedder(ProviderConfig cfg, std::size_t dim);
  std::string id() const override { return "http:" + cfg_.model; }
  std::size_t dim() const override { return dim_; }
  std::vector<double> embed(std::string_view text) const override;

 private:
  ProviderConfig cfg_;
  std::size_t dim_;
  std::string credential_;
};

// Reads the variable named by cfg.credential_env. ConfigError when the name is
// empty or the variable is unset.
std::string read_credential(const ProviderConfig& cfg);

}  // namespace molgen::llm
