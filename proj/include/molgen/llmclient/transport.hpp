#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "molgen/error.hpp"

namespace molgen::llm {

struct HttpRequest {
  std::string url;  // scheme://host[:port]/path
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::chrono::milliseconds timeout{60000};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Raw HTTP POST. Connection-level failures throw TransientProviderError.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

// Raised when a network request is attempted while networking is disabled.
class NetworkRefusedError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class RefusingTransport final : public Transport {
 public:
  HttpResponse post(const HttpRequest& request) override;
};

class HttplibTransport final : public Transport {
 public:
  HttpResponse post(const HttpRequest& request) override;
};

using TransportFactory = std::function<std::unique_ptr<Transport>()>;

// Process-wide factory used by live providers. Defaults to HttplibTransport.
void set_transport_factory(TransportFactory factory);
std::unique_ptr<Transport> make_transport();

// Replaces the factory so every live request fails with NetworkRefusedError.
void install_refusing_transport();

}  // namespace molgen::llm
