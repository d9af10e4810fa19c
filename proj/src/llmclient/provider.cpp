#include "molgen/llmclient/provider.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "molgen/hash.hpp"
#include "molgen/llmclient/client.hpp"
#include "molgen/llmclient/transport.hpp"
#include "molgen/text.hpp"

namespace molgen::llm {
namespace {

struct Block {
  std::string smiles;
  std::string description;
};

// Demonstration blocks in prompt order plus the query block, which is the one
// with an empty answer field.
std::vector<Block> read_blocks(const std::string& prompt) {
  std::vector<Block> blocks;
  Block cur;
  bool have_smiles = false, have_desc = false;
  for (const auto& line : text::split(prompt, '\n')) {
    if (line.rfind("SMILES:", 0) == 0) {
      cur.smiles = std::string(text::trim(std::string_view(line).substr(7)));
      have_smiles = true;
    } else if (line.rfind("Description:", 0) == 0) {
      cur.description = std::string(text::trim(std::string_view(line).substr(12)));
      have_desc = true;
    } else {
      continue;
    }
    if (have_smiles && have_desc) {
      blocks.push_back(std::move(cur));
      cur = {};
      have_smiles = have_desc = false;
    }
  }
  return blocks;
}

void check_status(const HttpResponse& res, const std::string& endpoint) {
  if (res.status == 200) return;
  const std::string msg = endpoint + " returned HTTP " + std::to_string(res.status);
  if (res.status == 401 || res.status == 403) throw CredentialError(msg + " (credential rejected)");
  if (res.status == 408 || res.status == 429 || res.status >= 500) throw TransientProviderError(msg);
  throw ProviderError(msg);
}

HttpRequest make_request(const ProviderConfig& cfg, const std::string& credential, std::string body) {
  HttpRequest req;
  req.url = cfg.endpoint;
  req.timeout = cfg.timeout;
  req.body = std::move(body);
  req.headers = {{"Content-Type", "application/json"}, {"Authorization", "Bearer " + credential}};
  return req;
}

}  // namespace

std::string describe(const ProviderConfig& cfg) {
  std::ostringstream os;
  os << "endpoint=" << cfg.endpoint << " adapter=" << cfg.adapter << " model=" << cfg.model
     << " timeout_ms=" << cfg.timeout.count() << " max_retries=" << cfg.max_retries
     << " temperature=" << cfg.temperature << " credential_env=" << cfg.credential_env;
  return os.str();
}

std::string read_credential(const ProviderConfig& cfg) {
  if (cfg.credential_env.empty()) throw ConfigError("live provider needs credential_env to name a variable");
  const char* value = std::getenv(cfg.credential_env.c_str());
  if (value == nullptr || *value == '\0') {
    throw ConfigError("credential variable " + cfg.credential_env + " is not set");
  }
  return value;
}

std::string EchoDemonstrationProvider::complete(const std::string& prompt) {
  const bool t2m = prompt.rfind(prompting::kText2MolInstruction, 0) == 0;
  std::vector<Block> blocks = read_blocks(prompt);
  if (!blocks.empty()) blocks.pop_back();  // the query
  if (!t2m) {
    if (blocks.empty()) return "Explanation: The molecule is an organic compound.";
    return "Explanation: " + blocks.back().description;
  }
  if (blocks.empty()) return "1. C\n\nExplanation: No demonstrations were given.";
  std::vector<std::string> ranked;
  for (auto it = blocks.rbegin(); it != blocks.rend() && ranked.size() < top_r_; ++it) {
    if (std::find(ranked.begin(), ranked.end(), it->smiles) == ranked.end()) ranked.push_back(it->smiles);
  }
  std::string out;
  for (std::size_t i = 0; i < ranked.size(); ++i) out += std::to_string(i + 1) + ". " + ranked[i] + "\n";
  out += "\nExplanation: The closest demonstration is described as: " + blocks.back().description;
  return out;
}

ReplayProvider::ReplayProvider(const std::filesystem::path& log) {
  for (auto& r : read_replay_log(log)) {
    if (r.raw_response) responses_[r.prompt_sha256] = std::move(*r.raw_response);
  }
}

std::string ReplayProvider::complete(const std::string& prompt) {
  const std::string sha = sha256_hex(prompt);
  const auto it = responses_.find(sha);
  if (it == responses_.end()) throw ProviderError("replay log has no response for prompt " + sha);
  return it->second;
}

HttpProvider::HttpProvider(ProviderConfig cfg)
    : cfg_(std::move(cfg)), adapter_(&find_adapter(cfg_.adapter)), credential_(read_credential(cfg_)) {
  if (cfg_.endpoint.empty()) throw ConfigError("live provider needs an endpoint");
}

std::string HttpProvider::id() const { return std::string(adapter_->name) + ":" + cfg_.model; }

std::string HttpProvider::complete(const std::string& prompt) {
  auto transport = make_transport();
  const HttpResponse res = transport->post(
      make_request(cfg_, credential_, adapter_->request_body(prompt, cfg_.model, cfg_.temperature)));
  check_status(res, cfg_.endpoint);
  return adapter_->response_text(res.body);
}

HttpTextEmbedder::HttpTextEmbedder(ProviderConfig cfg, std::size_t dim)
    : cfg_(std::move(cfg)), dim_(dim), credential_(read_credential(cfg_)) {
  if (cfg_.endpoint.empty()) throw ConfigError("embedding provider needs an endpoint");
}

std::vector<double> HttpTextEmbedder::embed(std::string_view text) const {
  auto transport = make_transport();
  const HttpResponse res =
      transport->post(make_request(cfg_, credential_, embedding_request_body(std::string(text), cfg_.model)));
  check_status(res, cfg_.endpoint);
  return embedding_from_response(res.body);
}

}  // namespace molgen::llm
