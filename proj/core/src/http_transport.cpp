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

#include "kged/http_transport.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <thread>

#ifdef KGED_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

namespace kged {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string target;  // path and query
};

SplitUrl split_url(const std::string& url) {
  std::size_t scheme_end = url.find("://");
  std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  std::size_t path_start = url.find('/', host_start);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse send(const HttpRequest& request) override {
    SplitUrl parts = split_url(request.url);
    httplib::Client client(parts.origin);
    auto seconds = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
    auto micros = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    client.set_follow_location(true);

    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [name, value] : request.headers) {
      if (name == "Content-Type") {
        content_type = value;
      } else {
        headers.emplace(name, value);
      }
    }

    httplib::Result result = request.method == HttpRequest::Method::kGet
                                 ? client.Get(parts.target, headers)
                                 : client.Post(parts.target, headers, request.body, content_type);
    HttpResponse out;
    if (!result) {
      httplib::Error err = result.error();
      out.failure = err == httplib::Error::Read || err == httplib::Error::Write ||
                            err == httplib::Error::ConnectionTimeout
                        ? HttpResponse::Failure::kTimeout
                        : HttpResponse::Failure::kConnection;
      out.error = httplib::to_string(err);
      return out;
    }
    out.status = result->status;
    out.body = result->body;
    return out;
  }
};

}  // namespace

std::unique_ptr<HttpTransport> make_default_transport() {
  return std::make_unique<HttplibTransport>();
}

bool is_transient(const HttpResponse& response) {
  if (response.failure != HttpResponse::Failure::kNone) return true;
  return response.status == 408 || response.status == 429 || response.status >= 500;
}

std::chrono::milliseconds RetryPolicy::backoff_for_attempt(int attempt) const {
  double scaled = static_cast<double>(initial_backoff.count()) *
                  std::pow(multiplier, static_cast<double>(std::max(attempt, 0)));
  double capped = std::min(scaled, static_cast<double>(max_backoff.count()));
  return std::chrono::milliseconds(static_cast<long long>(capped));
}

void RetryPolicy::wait(int attempt) const {
  auto delay = backoff_for_attempt(attempt);
  if (sleep) {
    sleep(delay);
  } else if (delay.count() > 0) {
    std::this_thread::sleep_for(delay);
  }
}

HttpResponse send_with_retry(HttpTransport& transport, const HttpRequest& request,
                             const RetryPolicy& policy, int& retries) {
  retries = 0;
  while (true) {
    HttpResponse response = transport.send(request);
    if (!is_transient(response) || retries >= policy.max_retries) return response;
    policy.wait(retries);
    ++retries;
  }
}

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == '(' ||
        c == ')' || c == ',') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

}  // namespace kged
