#include "varmath/remote.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "varmath/errors.hpp"

#if defined(VARMATH_HAS_OPENSSL)
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace varmath {
namespace {

using ordered_json = nlohmann::ordered_json;

/// Splits "https://host[:port]/path" into client target and path prefix.
struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // leading path, possibly empty
};

ParsedUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("base URL must start with http:// or https://: '" + url +
                      "'");
  }
  auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  if (path_start == std::string::npos) {
    out.origin = url;
  } else {
    out.origin = url.substr(0, path_start);
    out.path = url.substr(path_start);
  }
  while (!out.path.empty() && out.path.back() == '/') {
    out.path.pop_back();
  }
  return out;
}

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse post(const HttpRequest& request) override {
    ParsedUrl url = split_url(request.url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(std::chrono::milliseconds(request.timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(request.timeout_ms));
    client.set_write_timeout(std::chrono::milliseconds(request.timeout_ms));
    client.set_follow_location(true);

    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [key, value] : request.headers) {
      if (key == "Content-Type") {
        content_type = value;
      } else {
        headers.emplace(key, value);
      }
    }
    auto result = client.Post(url.path.empty() ? "/" : url.path, headers,
                              request.body, content_type);
    HttpResponse response;
    if (!result) {
      response.status = 0;
      response.error = httplib::to_string(result.error());
      return response;
    }
    response.status = result->status;
    response.body = result->body;
    return response;
  }
};

bool retryable(const HttpResponse& response) {
  if (response.status == 0) {
    return true;  // network-level failure
  }
  return response.status == 408 || response.status == 429 ||
         response.status >= 500;
}

std::string failure_tag(const HttpResponse& response) {
  if (response.status == 0) {
    return "network";
  }
  return "http_" + std::to_string(response.status);
}

}  // namespace

std::unique_ptr<HttpTransport> make_default_transport() {
  return std::make_unique<HttplibTransport>();
}

RemoteEndpoint::RemoteEndpoint(RemoteConfig config,
                               std::unique_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  if (config_.base_url.empty()) {
    throw ConfigError("remote endpoint requires a base URL");
  }
  if (config_.model.empty()) {
    throw ConfigError("remote endpoint requires a model name");
  }
  if (!transport_) {
    throw ConfigError("remote endpoint requires an HTTP transport");
  }
  if (config_.api_key.empty()) {
    if (const char* env = std::getenv("VARMATH_API_KEY")) {
      config_.api_key = env;
    }
  }
  if (config_.initial_backoff_ms < 0 || config_.max_backoff_ms < 0) {
    throw ConfigError("backoff intervals must be non-negative");
  }
}

std::string RemoteEndpoint::name() const { return config_.model; }

std::string RemoteEndpoint::request_body(const ProblemInstance& instance,
                                         const GenerationConfig& config) const {
  ordered_json body;
  body["model"] = config_.model;
  body["messages"] = ordered_json::array(
      {ordered_json{{"role", "user"}, {"content", config.render_prompt(instance)}}});
  body["temperature"] = config.temperature;
  body["top_p"] = config.top_p;
  body["max_tokens"] = config.max_tokens;
  body["n"] = 1;
  return body.dump();
}

Completion RemoteEndpoint::complete(const ProblemInstance& instance,
                                    int /*generation_index*/,
                                    const GenerationConfig& config) {
  HttpRequest request;
  std::string base = config_.base_url;
  while (!base.empty() && base.back() == '/') {
    base.pop_back();
  }
  request.url = base + "/chat/completions";
  request.body = request_body(instance, config);
  request.timeout_ms = config.timeout_ms;
  request.headers["Content-Type"] = "application/json";
  if (!config_.api_key.empty()) {
    request.headers["Authorization"] = "Bearer " + config_.api_key;
  }

  auto started = std::chrono::steady_clock::now();
  auto elapsed_ms = [&]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - started)
        .count();
  };

  HttpResponse response;
  int backoff_ms = config_.initial_backoff_ms;
  for (int attempt = 0;; ++attempt) {
    response = transport_->post(request);
    if (!retryable(response) || attempt >= config.retry_budget) {
      break;
    }
    if (backoff_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
    }
    backoff_ms = std::min(std::max(backoff_ms, 1) * 2, config_.max_backoff_ms);
  }

  Completion out;
  out.latency_ms = elapsed_ms();
  if (response.status != 200) {
    out.error = failure_tag(response);
    return out;
  }
  try {
    auto parsed = ordered_json::parse(response.body);
    out.text =
        parsed.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const std::exception&) {
    out.error = "malformed_response";
  }
  return out;
}

}  // namespace varmath
