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

#include "kged/http_backend.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "json.hpp"
#include "kged/error.hpp"

namespace kged {
namespace {

std::optional<std::string> getenv_lookup(const std::string& name) {
  const char* value = std::getenv(name.c_str());
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

}  // namespace

HttpSelector::HttpSelector(HttpBackendConfig config, std::shared_ptr<HttpTransport> transport,
                           EnvLookup env)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      env_(env ? std::move(env) : EnvLookup(getenv_lookup)),
      in_flight_(static_cast<std::ptrdiff_t>(
          std::clamp<std::size_t>(config_.max_in_flight, 1, kMaxInFlight))) {}

std::string HttpSelector::request_body(const ChoiceQuery& query) const {
  PromptMessages prompt = render_prompt(query);
  nlohmann::ordered_json body;
  body["model"] = config_.model;
  body["temperature"] = 0;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "system"}, {"content", prompt.system}}, {{"role", "user"}, {"content", prompt.user}}});
  return body.dump();
}

void HttpSelector::throttle() {
  if (config_.min_request_interval.count() <= 0) return;
  std::chrono::steady_clock::time_point start;
  {
    std::lock_guard lock(rate_mutex_);
    auto now = std::chrono::steady_clock::now();
    start = std::max(now, next_start_);
    next_start_ = start + config_.min_request_interval;
  }
  std::this_thread::sleep_until(start);
}

Selection HttpSelector::select(const ChoiceQuery& query, const SelectionContext& context) {
  std::optional<std::string> key = env_(config_.api_key_env);
  if (!key) {
    throw SelectorError(SelectorError::Kind::kCredential,
                        "environment variable " + config_.api_key_env + " is not set");
  }

  HttpRequest request;
  request.method = HttpRequest::Method::kPost;
  request.url = config_.endpoint;
  request.timeout = config_.timeout;
  request.headers.emplace_back("Authorization", "Bearer " + *key);
  request.headers.emplace_back("Content-Type", "application/json");
  request.body = request_body(query);

  int retries = 0;
  HttpResponse response;
  {
    in_flight_.acquire();
    struct Release {
      std::counting_semaphore<kMaxInFlight>& sem;
      ~Release() { sem.release(); }
    } release{in_flight_};
    RetryPolicy policy = config_.retry;
    auto inner_sleep = policy.sleep;
    throttle();
    policy.sleep = [&](std::chrono::milliseconds delay) {
      if (inner_sleep) {
        inner_sleep(delay);
      } else if (delay.count() > 0) {
        std::this_thread::sleep_for(delay);
      }
      throttle();
    };
    response = send_with_retry(*transport_, request, policy, retries);
  }

  const std::string where = " (mention '" + context.mention_id + "', call " +
                            std::to_string(context.ordinal) + ")";
  if (response.failure != HttpResponse::Failure::kNone || is_transient(response)) {
    std::string detail = response.failure != HttpResponse::Failure::kNone
                             ? response.error
                             : "HTTP " + std::to_string(response.status);
    throw SelectorError(SelectorError::Kind::kRetriesExhausted,
                        "selector request failed after " + std::to_string(retries) +
                            " retries: " + detail + where);
  }
  if (response.status == 401 || response.status == 403) {
    throw SelectorError(SelectorError::Kind::kCredential,
                        "endpoint rejected the credential (HTTP " +
                            std::to_string(response.status) + ")" + where);
  }
  if (response.status < 200 || response.status >= 300) {
    throw SelectorError(SelectorError::Kind::kRequest,
                        "selector request failed with HTTP " + std::to_string(response.status) +
                            where);
  }

  nlohmann::json envelope = nlohmann::json::parse(response.body, nullptr, false);
  const nlohmann::json* content = nullptr;
  if (!envelope.is_discarded() && envelope.is_object() && envelope.contains("choices") &&
      envelope["choices"].is_array() && !envelope["choices"].empty()) {
    const auto& first = envelope["choices"][0];
    if (first.is_object() && first.contains("message") && first["message"].is_object() &&
        first["message"].contains("content") && first["message"]["content"].is_string()) {
      content = &first["message"]["content"];
    }
  }
  if (content == nullptr) {
    throw SelectorError(SelectorError::Kind::kEnvelope,
                        "response is not a chat-completion envelope" + where);
  }
  Selection selection = parse_response(content->get<std::string>(), query);
  selection.retries = retries;
  return selection;
}

}  // namespace kged
