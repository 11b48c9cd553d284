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

#ifndef KGED_DESCRIPTIONS_HPP_
#define KGED_DESCRIPTIONS_HPP_

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "kged/http_transport.hpp"

namespace kged {

inline constexpr std::size_t kDefaultDescriptionLimit = 250;

// First `limit` Unicode scalar values of UTF-8 `text`. Never splits a code
// point; invalid lead bytes count as one character each.
std::string truncate_for_prompt(std::string_view text,
                                std::size_t limit = kDefaultDescriptionLimit);

// Number of code points in UTF-8 `text`.
std::size_t utf8_length(std::string_view text);

struct Description {
  std::string entity;
  std::string text;  // full text; truncation happens when serving a prompt
  std::string fetched_at;
  std::string source;
};

enum class LookupStatus {
  kCached,       // served from the cache, found
  kFetched,      // cache miss, fetched and stored
  kNotFound,     // known absent (cached or just learned)
  kFetchFailed,  // network failure after retries; not cached
  kOfflineMiss,  // cache miss with fetching disabled
};

std::string_view to_string(LookupStatus status);

struct DescriptionLookup {
  std::optional<Description> description;
  LookupStatus status = LookupStatus::kNotFound;
};

// What the pruning loop consumes. Implementations must be thread-safe.
class DescriptionSource {
 public:
  virtual ~DescriptionSource() = default;
  virtual DescriptionLookup lookup(const std::string& entity) = 0;

  std::optional<Description> get_description(const std::string& entity) {
    return lookup(entity).description;
  }
};

// In-memory source, mostly for tests and the description-free baseline.
class StaticDescriptions final : public DescriptionSource {
 public:
  StaticDescriptions() = default;
  explicit StaticDescriptions(std::map<std::string, std::string> texts)
      : texts_(std::move(texts)) {}
  DescriptionLookup lookup(const std::string& entity) override;

 private:
  std::map<std::string, std::string> texts_;
};

// Result of one remote lookup.
struct FetchResult {
  enum class Status { kFound, kNotFound, kFailed };
  Status status = Status::kFailed;
  std::string text;
  std::string detail;
};

class KbFetcher {
 public:
  virtual ~KbFetcher() = default;
  virtual FetchResult fetch(const std::string& entity) = 0;
  // Identifier written to the cache's `source` field.
  virtual std::string source_id() const = 0;
};

struct HttpKbConfig {
  // `{entity}` is replaced by the percent-encoded label, spaces as '_'.
  std::string url_template = "https://en.wikipedia.org/api/rest_v1/page/summary/{entity}";
  // Dotted path into the JSON response.
  std::string field_path = "extract";
  RetryPolicy retry;
  std::chrono::milliseconds timeout{10000};
  std::string user_agent = "kged/1.0";
};

// Summary-endpoint fetcher. 404 means not found; transient failures are
// retried per the policy, anything else is a failure.
class HttpKbFetcher final : public KbFetcher {
 public:
  HttpKbFetcher(HttpKbConfig config, std::shared_ptr<HttpTransport> transport);
  FetchResult fetch(const std::string& entity) override;
  std::string source_id() const override;

  std::string url_for(const std::string& entity) const;

 private:
  HttpKbConfig config_;
  std::shared_ptr<HttpTransport> transport_;
};

// Durable cache in front of a fetcher.
//
// The cache file is JSON Lines, one {entity, text|null, fetched_at, source}
// record per line; later lines win. Reads go through an in-memory index
// guarded by a shared mutex, fetch-and-append runs under a single writer lock.
// Unparseable lines are dropped with a warning and the file is rewritten.
class DescriptionStore final : public DescriptionSource {
 public:
  struct Options {
    bool offline = false;
  };

  // `fetcher` may be null, which behaves like offline mode. An empty
  // `cache_path` keeps the cache in memory only.
  DescriptionStore(std::filesystem::path cache_path, std::unique_ptr<KbFetcher> fetcher,
                   Options options);

  DescriptionLookup lookup(const std::string& entity) override;

  std::size_t size() const;
  const std::vector<std::string>& warnings() const { return warnings_; }
  // Remote calls issued since construction.
  std::size_t fetch_count() const { return fetch_count_.load(); }

 private:
  struct Entry {
    std::optional<std::string> text;
    std::string fetched_at;
    std::string source;
  };

  void load_cache();
  void append(const std::string& entity, const Entry& entry);

  std::filesystem::path cache_path_;
  std::unique_ptr<KbFetcher> fetcher_;
  Options options_;
  mutable std::shared_mutex index_mutex_;
  std::mutex writer_mutex_;
  std::map<std::string, Entry, std::less<>> index_;
  std::vector<std::string> warnings_;
  std::atomic<std::size_t> fetch_count_{0};
};

}  // namespace kged

#endif  // KGED_DESCRIPTIONS_HPP_
