#include "molgen/llmclient/adapters.hpp"

#include <nlohmann/json.hpp>

#include "molgen/error.hpp"

namespace molgen::llm {
namespace {

using nlohmann::json;

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProviderError(std::string("provider returned a non-JSON body: ") + e.what());
  }
}

std::string generic_request(const std::string& prompt, const std::string& model, double temperature) {
  return json{{"prompt", prompt}, {"model", model}, {"temperature", temperature}}.dump();
}

std::string generic_response(const std::string& body) {
  const json j = parse_body(body);
  if (!j.contains("text") || !j["text"].is_string()) throw ProviderError("response has no \"text\" field");
  return j["text"].get<std::string>();
}

std::string chat_request(const std::string& prompt, const std::string& model, double temperature) {
  return json{{"model", model},
              {"temperature", temperature},
              {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}}
      .dump();
}

std::string chat_response(const std::string& body) {
  const json j = parse_body(body);
  const json::json_pointer ptr("/choices/0/message/content");
  if (!j.contains(ptr) || !j[ptr].is_string()) {
    throw ProviderError("response has no choices[0].message.content");
  }
  return j[ptr].get<std::string>();
}

constexpr Adapter kAdapters[] = {
    {"generic", generic_request, generic_response},
    {"openai-chat", chat_request, chat_response},
};

}  // namespace

const Adapter& find_adapter(const std::string& name) {
  for (const auto& a : kAdapters) {
    if (name == a.name) return a;
  }
  throw ConfigError("unknown provider adapter '" + name + "' (expected generic or openai-chat)");
}

std::string embedding_request_body(const std::string& text, const std::string& model) {
  return json{{"model", model}, {"input", text}}.dump();
}

std::vector<double> embedding_from_response(const std::string& body) {
  const json j = parse_body(body);
  const json::json_pointer ptr("/data/0/embedding");
  if (!j.contains(ptr) || !j[ptr].is_array()) throw ProviderError("response has no data[0].embedding");
  std::vector<double> out;
  for (const auto& x : j[ptr]) {
    if (!x.is_number()) throw ProviderError("embedding contains a non-numeric value");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace molgen::llm
