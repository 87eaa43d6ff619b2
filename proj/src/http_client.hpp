#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>

#include "verse_eval/io.hpp"
#include "verse_eval/providers.hpp"

namespace verse_eval {

/// JSON-over-HTTP transport shared by the http providers. One connection per
/// request; at most `max_in_flight` requests run at once.
class HttpInferenceClient {
 public:
  HttpInferenceClient(ProviderConfig config, Sleeper sleep, bool retry);

  const ProviderConfig& config() const { return config_; }
  const std::string& endpoint() const { return config_.endpoint; }

  /// POST `path` (relative to the endpoint prefix). Transport failures and
  /// 5xx raise ProviderUnavailable; they are retried when enabled.
  io::Json post(const std::string& path, const io::Json& body) const;
  io::Json get(const std::string& path) const;

  /// GET /v1/health once and cache the result. Refuses a service whose label
  /// order differs from the canonical vocabulary.
  const ServiceInfo& info() const;

 private:
  io::Json send_once(const std::string& method, const std::string& path,
                     const io::Json* body) const;

  ProviderConfig config_;
  Sleeper sleep_;
  RetryPolicy policy_;
  std::string origin_;  // scheme://host:port
  std::string prefix_;  // path prefix without trailing slash
  mutable std::counting_semaphore<1024> in_flight_;
  mutable std::mutex info_mutex_;
  mutable std::optional<ServiceInfo> info_;
};

}  // namespace verse_eval
