#ifndef VARMATH_REMOTE_HPP
#define VARMATH_REMOTE_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "varmath/harness.hpp"

namespace varmath {

/// Minimal HTTP request passed to the transport layer.
struct HttpRequest {
  std::string url;
  std::string body;
  std::map<std::string, std::string> headers;
  int timeout_ms = 120000;
};

/// Transport result.  `status == 0` signals a network-level failure whose
/// description is in `error`.
struct HttpResponse {
  int status = 0;
  std::string body;
  std::string error;
};

/// Injection point for the HTTP stack; tests substitute a scripted fake.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

/// Returns the built-in transport, or nullptr when the library was compiled
/// without TLS support.
std::unique_ptr<HttpTransport> make_default_transport();

/// Connection settings for an OpenAI-compatible chat-completions endpoint.
struct RemoteConfig {
  std::string base_url;
  std::string model;
  /// Falls back to the VARMATH_API_KEY environment variable when empty.
  std::string api_key;
  int initial_backoff_ms = 500;
  int max_backoff_ms = 8000;
};

/// ModelClient speaking the chat-completions protocol.  Requests that fail
/// with 408/429/5xx or a network error are retried with exponential backoff
/// up to the generation config's retry budget; a request that still fails
/// yields a Completion tagged "http_<code>" or "network".
class RemoteEndpoint : public ModelClient {
 public:
  RemoteEndpoint(RemoteConfig config, std::unique_ptr<HttpTransport> transport);

  std::string name() const override;
  bool deterministic() const override { return false; }
  Completion complete(const ProblemInstance& instance, int generation_index,
                      const GenerationConfig& config) override;

  /// Builds the JSON request body (exposed for tests).
  std::string request_body(const ProblemInstance& instance,
                           const GenerationConfig& config) const;

 private:
  RemoteConfig config_;
  std::unique_ptr<HttpTransport> transport_;
};

}  // namespace varmath

#endif  // VARMATH_REMOTE_HPP
