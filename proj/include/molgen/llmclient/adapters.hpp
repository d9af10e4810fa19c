#pragma once

#include <string>
#include <vector>

// Request and response shapes for the supported endpoint families. Every
// adapter sends the prompt as a single text field plus model name and
// temperature, JSON-encoded, and authenticates with "Authorization: Bearer".
//
//   generic      request  {"prompt": p, "model": m, "temperature": t}
//                response {"text": "..."}
//   openai-chat  request  {"model": m, "temperature": t,
//                          "messages": [{"role": "user", "content": p}]}
//                response {"choices": [{"message": {"content": "..."}}]}
//
// Text embeddings use {"model": m, "input": text} and read
// {"data": [{"embedding": [...]}]}.
namespace molgen::llm {

struct Adapter {
  const char* name;
  std::string (*request_body)(const std::string& prompt, const std::string& model, double temperature);
  // Malformed bodies raise ProviderError.
  std::string (*response_text)(const std::string& body);
};

// ConfigError for unknown names.
const Adapter& find_adapter(const std::string& name);

std::string embedding_request_body(const std::string& text, const std::string& model);
std::vector<double> embedding_from_response(const std::string& body);

}  // namespace molgen::llm
