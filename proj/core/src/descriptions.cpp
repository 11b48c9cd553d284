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

#include "kged/descriptions.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include "json.hpp"

namespace kged {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::size_t sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if (lead >= 0xC0 && lead < 0xE0) return 2;
  if (lead >= 0xE0 && lead < 0xF0) return 3;
  if (lead >= 0xF0 && lead < 0xF8) return 4;
  return 1;
}

std::string utc_now() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string truncate_for_prompt(std::string_view text, std::size_t limit) {
  std::size_t pos = 0;
  std::size_t count = 0;
  while (pos < text.size() && count < limit) {
    std::size_t len = sequence_length(static_cast<unsigned char>(text[pos]));
    if (pos + len > text.size()) len = text.size() - pos;
    pos += len;
    ++count;
  }
  return std::string(text.substr(0, pos));
}

std::size_t utf8_length(std::string_view text) {
  std::size_t pos = 0;
  std::size_t count = 0;
  while (pos < text.size()) {
    pos += sequence_length(static_cast<unsigned char>(text[pos]));
    ++count;
  }
  return count;
}

std::string_view to_string(LookupStatus status) {
  switch (status) {
    case LookupStatus::kCached:
      return "cached";
    case LookupStatus::kFetched:
      return "fetched";
    case LookupStatus::kNotFound:
      return "not_found";
    case LookupStatus::kFetchFailed:
      return "fetch_failed";
    case LookupStatus::kOfflineMiss:
      return "offline_miss";
  }
  return "unknown";
}

DescriptionLookup StaticDescriptions::lookup(const std::string& entity) {
  auto it = texts_.find(entity);
  if (it == texts_.end()) return {std::nullopt, LookupStatus::kNotFound};
  return {Description{entity, it->second, "", "static"}, LookupStatus::kCached};
}

// ---------------------------------------------------------------------------

HttpKbFetcher::HttpKbFetcher(HttpKbConfig config, std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {}

std::string HttpKbFetcher::url_for(const std::string& entity) const {
  std::string title = entity;
  std::replace(title.begin(), title.end(), ' ', '_');
  std::string url = config_.url_template;
  const std::string placeholder = "{entity}";
  if (auto at = url.find(placeholder); at != std::string::npos) {
    url.replace(at, placeholder.size(), percent_encode(title));
  }
  return url;
}

std::string HttpKbFetcher::source_id() const { return config_.url_template; }

FetchResult HttpKbFetcher::fetch(const std::string& entity) {
  HttpRequest request;
  request.method = HttpRequest::Method::kGet;
  request.url = url_for(entity);
  request.timeout = config_.timeout;
  request.headers.emplace_back("User-Agent", config_.user_agent);
  request.headers.emplace_back("Accept", "application/json");

  int retries = 0;
  HttpResponse response = send_with_retry(*transport_, request, config_.retry, retries);
  FetchResult out;
  if (response.failure != HttpResponse::Failure::kNone) {
    out.detail = response.error;
    return out;
  }
  if (response.status == 404) {
    out.status = FetchResult::Status::kNotFound;
    return out;
  }
  if (response.status != 200) {
    out.detail = "HTTP " + std::to_string(response.status);
    return out;
  }
  json body = json::parse(response.body, nullptr, false);
  if (body.is_discarded()) {
    out.detail = "response is not JSON";
    return out;
  }
  const json* node = &body;
  std::size_t start = 0;
  while (start <= config_.field_path.size()) {
    std::size_t dot = config_.field_path.find('.', start);
    std::string key = config_.field_path.substr(start, dot - start);
    if (!node->is_object() || !node->contains(key)) {
      out.status = FetchResult::Status::kNotFound;
      return out;
    }
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (!node->is_string() || node->get<std::string>().empty()) {
    out.status = FetchResult::Status::kNotFound;
    return out;
  }
  out.status = FetchResult::Status::kFound;
  out.text = node->get<std::string>();
  return out;
}

// ---------------------------------------------------------------------------

DescriptionStore::DescriptionStore(std::filesystem::path cache_path,
                                   std::unique_ptr<KbFetcher> fetcher, Options options)
    : cache_path_(std::move(cache_path)), fetcher_(std::move(fetcher)), options_(options) {
  if (!cache_path_.empty()) load_cache();
}

void DescriptionStore::load_cache() {
  std::ifstream in(cache_path_);
  if (!in) return;
  bool corrupt = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json record = json::parse(line, nullptr, false);
    bool ok = !record.is_discarded() && record.is_object() && record.contains("entity") &&
              record["entity"].is_string() && record.contains("text") &&
              (record["text"].is_string() || record["text"].is_null());
    if (!ok) {
      corrupt = true;
      warnings_.push_back(cache_path_.string() + ":" + std::to_string(lineno) +
                          ": dropping unreadable cache record");
      continue;
    }
    Entry entry;
    if (record["text"].is_string()) entry.text = record["text"].get<std::string>();
    if (record.contains("fetched_at") && record["fetched_at"].is_string()) {
      entry.fetched_at = record["fetched_at"].get<std::string>();
    }
    if (record.contains("source") && record["source"].is_string()) {
      entry.source = record["source"].get<std::string>();
    }
    index_[record["entity"].get<std::string>()] = std::move(entry);
  }
  in.close();
  if (!corrupt) return;

  for (const auto& w : warnings_) std::cerr << "warning: " << w << '\n';
  std::ofstream out(cache_path_, std::ios::trunc);
  for (const auto& [entity, entry] : index_) {
    ordered_json record;
    record["entity"] = entity;
    record["text"] = entry.text ? ordered_json(*entry.text) : ordered_json(nullptr);
    record["fetched_at"] = entry.fetched_at;
    record["source"] = entry.source;
    out << record.dump() << '\n';
  }
}

void DescriptionStore::append(const std::string& entity, const Entry& entry) {
  if (cache_path_.empty()) return;
  ordered_json record;
  record["entity"] = entity;
  record["text"] = entry.text ? ordered_json(*entry.text) : ordered_json(nullptr);
  record["fetched_at"] = entry.fetched_at;
  record["source"] = entry.source;
  std::ofstream out(cache_path_, std::ios::app);
  out << record.dump() << '\n';
}

DescriptionLookup DescriptionStore::lookup(const std::string& entity) {
  auto from_entry = [&entity](const Entry& entry, LookupStatus found) -> DescriptionLookup {
    if (!entry.text) return {std::nullopt, LookupStatus::kNotFound};
    return {Description{entity, *entry.text, entry.fetched_at, entry.source}, found};
  };
  {
    std::shared_lock lock(index_mutex_);
    if (auto it = index_.find(entity); it != index_.end()) {
      return from_entry(it->second, LookupStatus::kCached);
    }
  }
  if (options_.offline || !fetcher_) return {std::nullopt, LookupStatus::kOfflineMiss};

  std::lock_guard writer(writer_mutex_);
  {
    std::shared_lock lock(index_mutex_);
    if (auto it = index_.find(entity); it != index_.end()) {
      return from_entry(it->second, LookupStatus::kCached);
    }
  }
  ++fetch_count_;
  FetchResult fetched = fetcher_->fetch(entity);
  if (fetched.status == FetchResult::Status::kFailed) {
    return {std::nullopt, LookupStatus::kFetchFailed};
  }
  Entry entry;
  if (fetched.status == FetchResult::Status::kFound) entry.text = std::move(fetched.text);
  entry.fetched_at = utc_now();
  entry.source = fetcher_->source_id();
  append(entity, entry);
  {
    std::unique_lock lock(index_mutex_);
    index_[entity] = entry;
  }
  return from_entry(entry, LookupStatus::kFetched);
}

std::size_t DescriptionStore::size() const {
  std::shared_lock lock(index_mutex_);
  return index_.size();
}

}  // namespace kged
