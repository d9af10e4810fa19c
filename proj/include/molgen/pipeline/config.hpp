#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "molgen/decoder/model.hpp"
#include "molgen/decoder/train.hpp"
#include "molgen/fusion/fusion.hpp"
#include "molgen/llmclient/provider.hpp"

namespace molgen::pipeline {

// Flat key=value settings. Every key has a default; unknown keys are a
// ConfigError. Lines starting with '#' and blank lines are ignored.
class Config {
 public:
  Config();

  static Config from_text(const std::string& text, const std::string& source = "config");
  static Config from_file(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;
  static const std::vector<std::string>& keys();

  std::string text(const std::string& key) const { return get(key); }
  std::size_t count(const std::string& key) const;
  std::uint64_t seed(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;

  // Every key in declaration order, one "key=value" line each.
  std::string render() const;

 private:
  std::map<std::string, std::string> values_;
};

enum class LlmMode { kStub, kReplay, kLive };
enum class EmbeddingMode { kStub, kFile };

struct RunConfig {
  decoder::Direction direction = decoder::Direction::kText2Mol;
  std::filesystem::path out_dir;
  std::filesystem::path corpus_dir;
  std::filesystem::path checkpoint;
  std::string split;

  // prepare
  std::filesystem::path source_dir;
  std::size_t synthetic_n = 0;
  std::uint64_t synthetic_seed = 0;

  // prompting
  bool scaffold = true;
  std::size_t k = 16;
  std::uint64_t sample_seed = 0;
  std::size_t prompt_budget = 12000;
  bool live_scaffold_embedder = false;

  // LLM
  LlmMode llm = LlmMode::kStub;
  std::string llm_stub;  // "echo" or "canned"
  std::string canned_response;
  std::filesystem::path replay_log;
  std::filesystem::path record_log;  // empty: no recording
  llm::ProviderConfig provider;
  llm::ProviderConfig embedding_service;
  std::size_t embedding_service_dim = 0;
  std::size_t concurrency = 4;

  // token embeddings
  EmbeddingMode embeddings = EmbeddingMode::kStub;
  std::uint64_t embedding_seed = 0;
  std::filesystem::path embedding_dir;

  decoder::ModelDims dims;
  decoder::TrainConfig train;
  fusion::AblationFlags flags;
  bool dump_attention = false;
};

// Typed view with validation (ConfigError). Relative paths stay relative to
// the working directory; corpus_dir and checkpoint default into out_dir.
RunConfig resolve(const Config& cfg);

}  // namespace molgen::pipeline
