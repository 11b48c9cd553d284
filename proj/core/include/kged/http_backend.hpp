// Copyright 2026 The kged Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KGED_HTTP_BACKEND_HPP_
#define KGED_HTTP_BACKEND_HPP_

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>

#include "kged/http_transport.hpp"
#include "kged/selector.hpp"

namespace kged {

struct HttpBackendConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-3.5-turbo-1106";
  // Environment variable holding the bearer token.
  std::string api_key_env = "OPENAI_API_KEY";
  RetryPolicy retry;
  std::chrono::milliseconds timeout{60000};
  std::size_t max_in_flight = 4;
  // Minimum spacing between request starts; zero disables the ceiling.
  std::chrono::milliseconds min_request_interval{0};
};

// Chat-completion client. Sends temperature 0, retries transient failures
// with exponential backoff, and parses the first choice's content with
// parse_response(). A 401/403 fails immediately with kCredential.
class HttpSelector final : public Selector {
 public:
  using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

  HttpSelector(HttpBackendConfig config, std::shared_ptr<HttpTransport> transport,
               EnvLookup env = {});

  Selection select(const ChoiceQuery& query, const SelectionContext& context) override;

  // Request body for `query`, exposed for tests and dry runs.
  std::string request_body(const ChoiceQuery& query) const;

 private:
  static constexpr std::ptrdiff_t kMaxInFlight = 1024;

  void throttle();

  HttpBackendConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  EnvLookup env_;
  std::counting_semaphore<kMaxInFlight> in_flight_;
  std::mutex rate_mutex_;
  std::chrono::steady_clock::time_point next_start_{};
};

}  // namespace kged

#endif  // KGED_HTTP_BACKEND_HPP_
