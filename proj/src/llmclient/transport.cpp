#include "molgen/llmclient/transport.hpp"

#include <mutex>

#include <httplib.h>

namespace molgen::llm {
namespace {

std::mutex& factory_mutex() {
  static std::mutex m;
  return m;
}

TransportFactory& factory_slot() {
  static TransportFactory f = [] { return std::make_unique<HttplibTransport>(); };
  return f;
}

struct SplitUrl {
  std::string origin;
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint URL lacks a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpResponse RefusingTransport::post(const HttpRequest& request) {
  throw NetworkRefusedError("network access refused: attempted POST to " + request.url);
}

HttpResponse HttplibTransport::post(const HttpRequest& request) {
  const SplitUrl parts = split_url(request.url);
  httplib::Client client(parts.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  client.set_connection_timeout(secs);
  client.set_read_timeout(secs);
  client.set_write_timeout(secs);
  httplib::Headers headers;
  std::string content_type = "application/json";
  for (const auto& [k, v] : request.headers) {
    if (k == "Content-Type") {
      content_type = v;
    } else {
      headers.emplace(k, v);
    }
  }
  auto res = client.Post(parts.path, headers, request.body, content_type);
  if (!res) {
    throw TransientProviderError("transport failure for " + request.url + ": " +
                                 httplib::to_string(res.error()));
  }
  return {res->status, res->body};
}

void set_transport_factory(TransportFactory factory) {
  std::lock_guard lock(factory_mutex());
  factory_slot() = std::move(factory);
}

std::unique_ptr<Transport> make_transport() {
  std::lock_guard lock(factory_mutex());
  return factory_slot()();
}

void install_refusing_transport() {
  set_transport_factory([] { return std::make_unique<RefusingTransport>(); });
}

}  // namespace molgen::llm
