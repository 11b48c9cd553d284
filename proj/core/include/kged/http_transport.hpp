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

#ifndef KGED_HTTP_TRANSPORT_HPP_
#define KGED_HTTP_TRANSPORT_HPP_

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace kged {

struct HttpRequest {
  enum class Method { kGet, kPost };
  Method method = Method::kPost;
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::chrono::milliseconds timeout{30000};
};

struct HttpResponse {
  enum class Failure { kNone, kTimeout, kConnection };
  Failure failure = Failure::kNone;
  int status = 0;
  std::string body;
  std::string error;  // transport-level detail when failure != kNone
};

// Seam between the clients and the network. Implementations must be safe to
// call from several threads at once.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

// cpp-httplib backed transport; https requires the OpenSSL build.
std::unique_ptr<HttpTransport> make_default_transport();

// Timeouts, connection failures, 408, 429 and 5xx.
bool is_transient(const HttpResponse& response);

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{8000};
  double multiplier = 2.0;
  // Replaced in tests to avoid real sleeps.
  std::function<void(std::chrono::milliseconds)> sleep;

  // initial * multiplier^attempt, capped at max_backoff.
  std::chrono::milliseconds backoff_for_attempt(int attempt) const;
  void wait(int attempt) const;
};

// Sends `request`, retrying transient failures per `policy`. `retries` is set
// to the number of retries spent. The last response is returned whether or
// not it succeeded; callers classify it.
HttpResponse send_with_retry(HttpTransport& transport, const HttpRequest& request,
                             const RetryPolicy& policy, int& retries);

std::string percent_encode(std::string_view text);

}  // namespace kged

#endif  // KGED_HTTP_TRANSPORT_HPP_
