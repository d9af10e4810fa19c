#include "molgen/pipeline/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "molgen/error.hpp"
#include "molgen/text.hpp"

namespace molgen::pipeline {
namespace {

const std::vector<std::pair<std::string, std::string>>& defaults() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"direction", "text2mol"},
      {"out_dir", "out"},
      {"corpus_dir", ""},  // default: <out_dir>/corpus
      {"checkpoint", ""},  // default: <out_dir>/model.ckpt
      {"split", "test"},
      {"source_dir", ""},
      {"synthetic_n", "0"},
      {"synthetic_seed", "0"},
      {"sampling", "scaffold"},
      {"k", "16"},
      {"sample_seed", "0"},
      {"prompt_budget", "12000"},
      {"scaffold_embedder", "tfidf"},
      {"llm_provider", "stub"},
      {"llm_stub", "echo"},
      {"llm_canned_response", ""},
      {"replay_log", ""},
      {"record_log", ""},  // live runs default to <out_dir>/replay.jsonl
      {"llm_endpoint", ""},
      {"llm_adapter", "openai-chat"},
      {"llm_model", ""},
      {"llm_credential_env", "MOLGEN_LLM_API_KEY"},
      {"llm_temperature", "0"},
      {"llm_timeout_s", "60"},
      {"llm_max_retries", "3"},
      {"llm_concurrency", "4"},
      {"embedding_service_endpoint", ""},
      {"embedding_service_model", ""},
      {"embedding_service_dim", "1536"},
      {"embedding_provider", "stub"},
      {"embedding_seed", "0"},
      {"embedding_dir", ""},
      {"d", "128"},
      {"heads", "4"},
      {"head_dim", "32"},
      {"layers", "2"},
      {"ffn_mult", "4"},
      {"max_len", "128"},
      {"r", "4"},
      {"batch_size", "32"},
      {"epochs", "100"},
      {"learning_rate", "0.001"},
      {"plateau_epochs", "10"},
      {"lr_factor", "0.5"},
      {"patience", "25"},
      {"max_steps", "0"},
      {"seed", "0"},
      {"monitor", "validation"},
      {"drop_exp", "false"},
      {"drop_org", "false"},
      {"drop_pred", "false"},
      {"linear_fuse", "false"},
      {"dump_attention", "false"},
  };
  return table;
}

std::string unescape(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      const char n = s[++i];
      out += n == 'n' ? '\n' : n == 't' ? '\t' : n;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::filesystem::path or_default(const std::string& value, const std::filesystem::path& fallback) {
  return value.empty() ? fallback : std::filesystem::path(value);
}

}  // namespace

Config::Config() {
  for (const auto& [k, v] : defaults()) values_[k] = v;
}

const std::vector<std::string>& Config::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& kv : defaults()) out.push_back(kv.first);
    return out;
  }();
  return names;
}

Config Config::from_text(const std::string& text, const std::string& source) {
  Config cfg;
  std::istringstream in(text);
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const std::string t(text::trim(line));
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key=value, got '" + t + "'");
    }
    try {
      cfg.set(std::string(text::trim(t.substr(0, eq))), std::string(text::trim(t.substr(eq + 1))));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

Config Config::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str(), path.string());
}

void Config::set(const std::string& key, const std::string& value) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second = value;
}

const std::string& Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

std::size_t Config::count(const std::string& key) const {
  const std::string& v = get(key);
  std::size_t used = 0;
  try {
    if (!v.empty() && v[0] != '-') {
      const unsigned long long n = std::stoull(v, &used);
      if (used == v.size()) return static_cast<std::size_t>(n);
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "' must be a non-negative integer, got '" + v + "'");
}

std::uint64_t Config::seed(const std::string& key) const { return count(key); }

double Config::real(const std::string& key) const {
  const std::string& v = get(key);
  std::size_t used = 0;
  try {
    const double x = std::stod(v, &used);
    if (used == v.size() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "' must be a finite number, got '" + v + "'");
}

bool Config::flag(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "' must be true or false, got '" + v + "'");
}

std::string Config::render() const {
  std::string out;
  for (const std::string& k : keys()) out += k + "=" + values_.at(k) + "\n";
  return out;
}

RunConfig resolve(const Config& cfg) {
  RunConfig rc;
  rc.direction = decoder::parse_direction(cfg.text("direction"));
  rc.out_dir = cfg.text("out_dir");
  if (rc.out_dir.empty()) throw ConfigError("out_dir must not be empty");
  rc.corpus_dir = or_default(cfg.text("corpus_dir"), rc.out_dir / "corpus");
  rc.checkpoint = or_default(cfg.text("checkpoint"), rc.out_dir / "model.ckpt");
  rc.split = cfg.text("split");
  if (rc.split != "train" && rc.split != "validation" && rc.split != "test" && rc.split != "all") {
    throw ConfigError("split must be train, validation, test or all, got '" + rc.split + "'");
  }

  rc.source_dir = cfg.text("source_dir");
  rc.synthetic_n = cfg.count("synthetic_n");
  rc.synthetic_seed = cfg.seed("synthetic_seed");

  const std::string sampling = cfg.text("sampling");
  if (sampling != "scaffold" && sampling != "random") {
    throw ConfigError("sampling must be scaffold or random, got '" + sampling + "'");
  }
  rc.scaffold = sampling == "scaffold";
  rc.k = cfg.count("k");
  rc.sample_seed = cfg.seed("sample_seed");
  rc.prompt_budget = cfg.count("prompt_budget");
  const std::string embedder = cfg.text("scaffold_embedder");
  if (embedder != "tfidf" && embedder != "live") {
    throw ConfigError("scaffold_embedder must be tfidf or live, got '" + embedder + "'");
  }
  rc.live_scaffold_embedder = embedder == "live";

  const std::string llm = cfg.text("llm_provider");
  if (llm == "stub") {
    rc.llm = LlmMode::kStub;
  } else if (llm == "replay") {
    rc.llm = LlmMode::kReplay;
  } else if (llm == "live") {
    rc.llm = LlmMode::kLive;
  } else {
    throw ConfigError("llm_provider must be stub, replay or live, got '" + llm + "'");
  }
  rc.llm_stub = cfg.text("llm_stub");
  if (rc.llm_stub != "echo" && rc.llm_stub != "canned") {
    throw ConfigError("llm_stub must be echo or canned, got '" + rc.llm_stub + "'");
  }
  rc.canned_response = unescape(cfg.text("llm_canned_response"));
  if (rc.llm == LlmMode::kStub && rc.llm_stub == "canned" && rc.canned_response.empty()) {
    throw ConfigError("llm_stub=canned needs llm_canned_response");
  }
  rc.replay_log = cfg.text("replay_log");
  if (rc.llm == LlmMode::kReplay) {
    if (rc.replay_log.empty()) throw ConfigError("llm_provider=replay needs replay_log");
    if (!std::filesystem::is_regular_file(rc.replay_log)) {
      throw ConfigError("replay_log " + rc.replay_log.string() + " does not exist");
    }
  }
  rc.record_log = cfg.text("record_log");
  if (rc.record_log.empty() && rc.llm == LlmMode::kLive) rc.record_log = rc.out_dir / "replay.jsonl";

  rc.provider.endpoint = cfg.text("llm_endpoint");
  rc.provider.adapter = cfg.text("llm_adapter");
  rc.provider.model = cfg.text("llm_model");
  rc.provider.credential_env = cfg.text("llm_credential_env");
  rc.provider.temperature = cfg.real("llm_temperature");
  rc.provider.timeout = std::chrono::milliseconds(static_cast<long long>(cfg.count("llm_timeout_s")) * 1000);
  rc.provider.max_retries = static_cast<int>(cfg.count("llm_max_retries"));
  rc.concurrency = cfg.count("llm_concurrency");
  if (rc.concurrency == 0) throw ConfigError("llm_concurrency must be positive");
  rc.embedding_service = rc.provider;
  rc.embedding_service.endpoint = cfg.text("embedding_service_endpoint");
  rc.embedding_service.model = cfg.text("embedding_service_model");
  rc.embedding_service_dim = cfg.count("embedding_service_dim");

  const std::string emb = cfg.text("embedding_provider");
  if (emb == "stub") {
    rc.embeddings = EmbeddingMode::kStub;
  } else if (emb == "file") {
    rc.embeddings = EmbeddingMode::kFile;
  } else {
    throw ConfigError("embedding_provider must be stub or file, got '" + emb + "'");
  }
  rc.embedding_seed = cfg.seed("embedding_seed");
  rc.embedding_dir = cfg.text("embedding_dir");
  if (rc.embeddings == EmbeddingMode::kFile && rc.embedding_dir.empty()) {
    throw ConfigError("embedding_provider=file needs embedding_dir");
  }

  rc.dims.d = cfg.count("d");
  rc.dims.heads = cfg.count("heads");
  rc.dims.head_dim = cfg.count("head_dim");
  rc.dims.layers = cfg.count("layers");
  rc.dims.ffn_mult = cfg.count("ffn_mult");
  rc.dims.max_len = cfg.count("max_len");
  rc.dims.r = cfg.count("r");
  if (rc.dims.d < 2) throw ConfigError("d must be at least 2");
  if (rc.dims.heads == 0 || rc.dims.head_dim == 0 || rc.dims.heads * rc.dims.head_dim != rc.dims.d) {
    throw ConfigError("heads * head_dim must equal d");
  }
  if (rc.dims.layers == 0 || rc.dims.ffn_mult == 0) throw ConfigError("layers and ffn_mult must be positive");
  if (rc.dims.max_len < 2) throw ConfigError("max_len must be at least 2");

  rc.train.batch_size = cfg.count("batch_size");
  rc.train.epochs = cfg.count("epochs");
  rc.train.learning_rate = cfg.real("learning_rate");
  rc.train.plateau_epochs = cfg.count("plateau_epochs");
  rc.train.lr_factor = cfg.real("lr_factor");
  rc.train.patience = cfg.count("patience");
  rc.train.max_steps = cfg.count("max_steps");
  rc.train.seed = cfg.seed("seed");
  const std::string monitor = cfg.text("monitor");
  if (monitor == "validation") {
    rc.train.monitor = decoder::Monitor::kValidation;
  } else if (monitor == "train") {
    rc.train.monitor = decoder::Monitor::kTrain;
  } else {
    throw ConfigError("monitor must be validation or train, got '" + monitor + "'");
  }
  decoder::validate(rc.train);

  rc.flags = {cfg.flag("drop_exp"), cfg.flag("drop_org"), cfg.flag("drop_pred"), cfg.flag("linear_fuse")};
  fusion::validate(rc.flags);
  rc.dump_attention = cfg.flag("dump_attention");
  return rc;
}

}  // namespace molgen::pipeline
