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

#ifndef KGED_SELECTOR_HPP_
#define KGED_SELECTOR_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kged/descriptions.hpp"
#include "kged/taxonomy.hpp"

namespace kged {

enum class QueryKind { kClassChoice, kEntityChoice, kMixedChoice, kAssessment };
enum class Sentinel { kNone, kOther };

std::string_view to_string(QueryKind kind);
std::string_view to_string(Sentinel sentinel);  // "None" / "Other"

// Prompt template revision written into every trace.
inline constexpr std::string_view kDefaultTemplateVersion = "v1";

struct QueryOption {
  std::size_t index = 0;  // 1-based
  std::string label;
  std::optional<std::string> description;  // already truncated
  // Set when a description was requested for this option.
  std::optional<LookupStatus> description_status;
};

// One multiple-choice question. When `sentinel` is set it is the last entry
// of `options`.
struct ChoiceQuery {
  QueryKind kind = QueryKind::kEntityChoice;
  std::string mention;
  std::string document_excerpt;
  std::vector<QueryOption> options;
  std::optional<Sentinel> sentinel;
  std::string template_version{kDefaultTemplateVersion};
  // ClassChoice only: the selector may name several classes.
  bool multi_select = false;
  // Entity and assessment options carry a description line (possibly the
  // "no description available" placeholder).
  bool with_descriptions = false;

  std::optional<std::size_t> sentinel_index() const {
    if (!sentinel) return std::nullopt;
    return options.size();
  }
};

struct QueryConfig {
  std::string template_version{kDefaultTemplateVersion};
  std::size_t desc_limit = kDefaultDescriptionLimit;
  std::size_t context_window = 2000;
  // Byte offset of the mention in the document, when known.
  std::optional<std::size_t> mention_start;
  bool multi_select = false;
};

// Window of about `window` bytes of `document` centred on the mention, cut at
// UTF-8 boundaries. The whole document when it already fits.
std::string document_excerpt(std::string_view document, std::string_view mention,
                             std::optional<std::size_t> mention_start, std::size_t window);

// Builds a query over `labels`. ClassChoice gets the None sentinel appended,
// MixedChoice gets Other. EntityChoice and Assessment options are enriched
// from `descriptions` when it is non-null. Throws ConfigError for an unknown
// template version and Error for an empty label list.
ChoiceQuery build_query(QueryKind kind, std::string_view mention, std::string_view document,
                        std::span<const std::string> labels, DescriptionSource* descriptions,
                        const QueryConfig& config);

struct PromptMessages {
  std::string system;
  std::string user;
};

// Pure function of the query fields.
PromptMessages render_prompt(const ChoiceQuery& query);

// Shown for options whose description could not be retrieved.
inline constexpr std::string_view kNoDescription = "no description available";

enum class SelectionKind { kOption, kSentinel, kAccept, kReject };
enum class ParseStatus { kExact, kNormalized, kFallback };

std::string_view to_string(SelectionKind kind);
std::string_view to_string(ParseStatus status);

struct Selection {
  SelectionKind kind = SelectionKind::kOption;
  // 1-based option index for kOption and kSentinel.
  std::size_t index = 0;
  // Multi-select ClassChoice: every chosen option, ascending. Holds `index`
  // alone otherwise.
  std::vector<std::size_t> indices;
  std::string raw_response;
  ParseStatus parse_status = ParseStatus::kExact;
  int retries = 0;
};

// Resolution order: a leading integer naming an option; a unique
// case-insensitive whole-word label match; otherwise the sentinel if the
// query has one, else option 1 (accept for assessments). Never throws.
Selection parse_response(std::string_view raw, const ChoiceQuery& query);

// Label of the selected option, the sentinel name, or "accept"/"reject".
std::string selected_label(const Selection& selection, const ChoiceQuery& query);

// Everything a backend may know about the call besides the query itself.
// `gold` is only read by the oracle backend and never reaches a prompt.
struct SelectionContext {
  std::string mention_id;
  std::size_t ordinal = 0;  // 0-based call number within the mention
  std::optional<std::string> gold;
};

// The LLM seam. Implementations must tolerate concurrent calls.
class Selector {
 public:
  virtual ~Selector() = default;
  virtual Selection select(const ChoiceQuery& query, const SelectionContext& context) = 0;
};

// Replays a JSON Lines script of {mention_id, ordinal, answer}. Answers are
// raw responses and go through parse_response. A missing entry throws
// SelectorError(kScript).
class MockSelector final : public Selector {
 public:
  explicit MockSelector(std::map<std::pair<std::string, std::size_t>, std::string> script);
  static MockSelector load(const std::filesystem::path& path);

  Selection select(const ChoiceQuery& query, const SelectionContext& context) override;

 private:
  std::map<std::pair<std::string, std::size_t>, std::string> script_;
};

// Upper-bound backend: always steers toward the gold entity using the
// taxonomy.
class OracleSelector final : public Selector {
 public:
  explicit OracleSelector(const TaxonomyStore& store) : store_(store) {}
  Selection select(const ChoiceQuery& query, const SelectionContext& context) override;

 private:
  const TaxonomyStore& store_;
};

// Decorator that remembers every answer so a run can be replayed through
// MockSelector.
class RecordingSelector final : public Selector {
 public:
  explicit RecordingSelector(Selector& inner) : inner_(inner) {}
  Selection select(const ChoiceQuery& query, const SelectionContext& context) override;

  // Script lines sorted by (mention_id, ordinal).
  std::string script_jsonl() const;

 private:
  Selector& inner_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::size_t>, std::string> answers_;
};

}  // namespace kged

#endif  // KGED_SELECTOR_HPP_
