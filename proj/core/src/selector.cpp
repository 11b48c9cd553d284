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

#include "kged/selector.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kged/error.hpp"

namespace kged {
namespace {

using nlohmann::json;

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Lowercase with underscores read as spaces, so "Justin_Bieber" matches
// "justin bieber".
std::string normalize(std::string_view text) {
  std::string out = lower(text);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string display(std::string_view label) {
  std::string out(label);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

bool is_word_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

bool contains_word(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  for (std::size_t at = haystack.find(needle); at != std::string_view::npos;
       at = haystack.find(needle, at + 1)) {
    bool left = at == 0 || !is_word_char(static_cast<unsigned char>(haystack[at - 1]));
    std::size_t end = at + needle.size();
    bool right =
        end == haystack.size() || !is_word_char(static_cast<unsigned char>(haystack[end]));
    if (left && right) return true;
  }
  return false;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

// Integer at the start of the response, after quotes, brackets and the like.
std::optional<std::size_t> leading_integer(std::string_view raw) {
  std::string_view text = trim(raw);
  while (!text.empty() && std::string_view("\"'([{*#<`").find(text.front()) != std::string_view::npos) {
    text.remove_prefix(1);
  }
  std::size_t value = 0;
  std::size_t digits = 0;
  while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits]))) {
    value = value * 10 + static_cast<std::size_t>(text[digits] - '0');
    if (++digits > 6) return std::nullopt;
  }
  if (digits == 0) return std::nullopt;
  if (digits < text.size() && std::isalpha(static_cast<unsigned char>(text[digits]))) {
    return std::nullopt;  // "3rd", "1990s"
  }
  return value;
}

std::vector<std::size_t> all_integers(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t value = 0;
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      value = value * 10 + static_cast<std::size_t>(text[i] - '0');
      ++i;
    }
    if (i - start <= 6) out.push_back(value);
  }
  return out;
}

Selection option_selection(const ChoiceQuery& query, std::size_t index, ParseStatus status,
                           std::string_view raw) {
  Selection s;
  s.index = index;
  s.indices = {index};
  s.kind = query.sentinel_index() == index ? SelectionKind::kSentinel : SelectionKind::kOption;
  s.parse_status = status;
  s.raw_response = std::string(raw);
  return s;
}

Selection parse_assessment(std::string_view raw) {
  Selection s;
  s.raw_response = std::string(raw);
  s.index = 1;
  s.indices = {1};
  std::string text = normalize(trim(raw));
  std::size_t start = 0;
  while (start < text.size() && !std::isalnum(static_cast<unsigned char>(text[start]))) ++start;
  std::size_t end = start;
  while (end < text.size() && std::isalpha(static_cast<unsigned char>(text[end]))) ++end;
  std::string first = text.substr(start, end - start);

  static const std::vector<std::string> kAccept = {"yes", "accept", "correct", "true"};
  static const std::vector<std::string> kReject = {"no", "reject", "incorrect", "false"};
  auto in = [](const std::vector<std::string>& words, const std::string& w) {
    return std::find(words.begin(), words.end(), w) != words.end();
  };
  if (in(kAccept, first)) {
    s.kind = SelectionKind::kAccept;
    return s;
  }
  if (in(kReject, first)) {
    s.kind = SelectionKind::kReject;
    return s;
  }
  bool says_yes = contains_word(text, "yes");
  bool says_no = contains_word(text, "no") || contains_word(text, "not");
  if (says_yes != says_no) {
    s.kind = says_yes ? SelectionKind::kAccept : SelectionKind::kReject;
    s.parse_status = ParseStatus::kNormalized;
    return s;
  }
  s.kind = SelectionKind::kAccept;
  s.parse_status = ParseStatus::kFallback;
  return s;
}

std::string describe_option(const QueryOption& option) {
  std::string line = std::to_string(option.index) + ". " + display(option.label);
  return line;
}

}  // namespace

std::string_view to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::kClassChoice:
      return "class_choice";
    case QueryKind::kEntityChoice:
      return "entity_choice";
    case QueryKind::kMixedChoice:
      return "mixed_choice";
    case QueryKind::kAssessment:
      return "assessment";
  }
  return "unknown";
}

std::string_view to_string(Sentinel sentinel) {
  return sentinel == Sentinel::kNone ? "None" : "Other";
}

std::string_view to_string(SelectionKind kind) {
  switch (kind) {
    case SelectionKind::kOption:
      return "option";
    case SelectionKind::kSentinel:
      return "sentinel";
    case SelectionKind::kAccept:
      return "accept";
    case SelectionKind::kReject:
      return "reject";
  }
  return "unknown";
}

std::string_view to_string(ParseStatus status) {
  switch (status) {
    case ParseStatus::kExact:
      return "exact";
    case ParseStatus::kNormalized:
      return "normalized";
    case ParseStatus::kFallback:
      return "fallback";
  }
  return "unknown";
}

std::string document_excerpt(std::string_view document, std::string_view mention,
                             std::optional<std::size_t> mention_start, std::size_t window) {
  if (document.size() <= window) return std::string(document);
  std::size_t start = 0;
  if (mention_start && *mention_start < document.size()) {
    start = *mention_start;
  } else if (auto at = lower(document).find(lower(mention)); at != std::string::npos) {
    start = at;
  }
  std::size_t centre = std::min(document.size(), start + mention.size() / 2);
  std::size_t begin = centre > window / 2 ? centre - window / 2 : 0;
  std::size_t end = std::min(document.size(), begin + window);
  begin = end > window ? end - window : 0;
  while (begin < end && is_continuation(static_cast<unsigned char>(document[begin]))) ++begin;
  while (end < document.size() && end > begin &&
         is_continuation(static_cast<unsigned char>(document[end]))) {
    --end;
  }
  return std::string(document.substr(begin, end - begin));
}

ChoiceQuery build_query(QueryKind kind, std::string_view mention, std::string_view document,
                        std::span<const std::string> labels, DescriptionSource* descriptions,
                        const QueryConfig& config) {
  if (config.template_version != kDefaultTemplateVersion) {
    throw ConfigError("unknown prompt template version '" + config.template_version + "'");
  }
  if (labels.empty()) throw Error("query needs at least one option");
  if (kind == QueryKind::kAssessment && labels.size() != 1) {
    throw Error("assessment queries take exactly one option");
  }

  ChoiceQuery query;
  query.kind = kind;
  query.mention = std::string(mention);
  query.document_excerpt =
      document_excerpt(document, mention, config.mention_start, config.context_window);
  query.template_version = config.template_version;
  query.multi_select = kind == QueryKind::kClassChoice && config.multi_select;
  bool wants_descriptions =
      (kind == QueryKind::kEntityChoice || kind == QueryKind::kAssessment) && descriptions;
  query.with_descriptions = wants_descriptions;

  for (const auto& label : labels) {
    QueryOption option;
    option.index = query.options.size() + 1;
    option.label = label;
    if (wants_descriptions) {
      DescriptionLookup found = descriptions->lookup(label);
      option.description_status = found.status;
      if (found.description) {
        option.description = truncate_for_prompt(found.description->text, config.desc_limit);
      }
    }
    query.options.push_back(std::move(option));
  }
  if (kind == QueryKind::kClassChoice) query.sentinel = Sentinel::kNone;
  if (kind == QueryKind::kMixedChoice) query.sentinel = Sentinel::kOther;
  if (query.sentinel) {
    QueryOption option;
    option.index = query.options.size() + 1;
    option.label = std::string(to_string(*query.sentinel));
    query.options.push_back(std::move(option));
  }
  return query;
}

PromptMessages render_prompt(const ChoiceQuery& query) {
  PromptMessages out;
  out.system =
      "You are an expert annotator for entity disambiguation. You read a document and decide "
      "what a highlighted mention in it refers to. Follow the answer format exactly.";

  std::ostringstream user;
  user << "Document: \"" << query.document_excerpt << "\"\n";
  user << "Mention: \"" << query.mention << "\"\n\n";

  auto option_lines = [&](bool with_descriptions) {
    for (const auto& option : query.options) {
      user << describe_option(option);
      if (with_descriptions && (!query.sentinel || option.index != query.options.size())) {
        user << ": " << (option.description ? *option.description : std::string(kNoDescription));
      }
      user << '\n';
    }
  };

  switch (query.kind) {
    case QueryKind::kClassChoice:
      user << "Which of the following classes does the mention \"" << query.mention
           << "\" belong to in this document? Choose None if no class fits.\n";
      option_lines(false);
      user << (query.multi_select
                   ? "Answer with the numbers of every fitting option, separated by commas.\n"
                   : "Answer with the number of the option only.\n");
      break;
    case QueryKind::kEntityChoice:
      user << "Which of the following entities does the mention \"" << query.mention
           << "\" refer to in this document?\n";
      option_lines(query.with_descriptions);
      user << "Answer with the number of the option only.\n";
      break;
    case QueryKind::kMixedChoice:
      user << "Which of the following classes does the mention \"" << query.mention
           << "\" belong to in this document? Choose Other if it is none of the listed "
              "classes.\n";
      option_lines(false);
      user << "Answer with the number of the option only.\n";
      break;
    case QueryKind::kAssessment: {
      const QueryOption& option = query.options.front();
      user << "Does the mention \"" << query.mention
           << "\" in this document refer to the following entity?\n";
      user << display(option.label);
      if (query.with_descriptions) {
        user << ": " << (option.description ? *option.description : std::string(kNoDescription));
      }
      user << "\nAnswer yes or no.\n";
      break;
    }
  }
  out.user = user.str();
  return out;
}

Selection parse_response(std::string_view raw, const ChoiceQuery& query) {
  if (query.kind == QueryKind::kAssessment) return parse_assessment(raw);

  const std::size_t n = query.options.size();
  if (auto value = leading_integer(raw); value && *value >= 1 && *value <= n) {
    Selection s = option_selection(query, *value, ParseStatus::kExact, raw);
    if (query.multi_select && s.kind == SelectionKind::kOption) {
      std::vector<std::size_t> picked;
      for (std::size_t v : all_integers(raw)) {
        if (v >= 1 && v <= n && query.sentinel_index() != v) picked.push_back(v);
      }
      std::sort(picked.begin(), picked.end());
      picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
      s.indices = std::move(picked);
      s.index = s.indices.front();
    }
    return s;
  }

  std::string text = normalize(raw);
  std::vector<std::size_t> matched;
  for (const auto& option : query.options) {
    if (contains_word(text, normalize(option.label))) matched.push_back(option.index);
  }
  // "Justin Bieber" also matches a "Justin" option; keep the most specific.
  std::vector<std::size_t> specific;
  for (std::size_t a : matched) {
    std::string la = normalize(query.options[a - 1].label);
    bool covered = std::any_of(matched.begin(), matched.end(), [&](std::size_t b) {
      std::string lb = normalize(query.options[b - 1].label);
      return a != b && lb.size() > la.size() && contains_word(lb, la);
    });
    if (!covered) specific.push_back(a);
  }
  if (specific.size() == 1) {
    return option_selection(query, specific.front(), ParseStatus::kNormalized, raw);
  }

  std::size_t fallback = query.sentinel_index().value_or(1);
  return option_selection(query, fallback, ParseStatus::kFallback, raw);
}

std::string selected_label(const Selection& selection, const ChoiceQuery& query) {
  switch (selection.kind) {
    case SelectionKind::kAccept:
      return "accept";
    case SelectionKind::kReject:
      return "reject";
    case SelectionKind::kOption:
    case SelectionKind::kSentinel:
      break;
  }
  if (selection.index == 0 || selection.index > query.options.size()) return "";
  return query.options[selection.index - 1].label;
}

// ---------------------------------------------------------------------------

MockSelector::MockSelector(std::map<std::pair<std::string, std::size_t>, std::string> script)
    : script_(std::move(script)) {}

MockSelector MockSelector::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mock script " + path.string());
  std::map<std::pair<std::string, std::size_t>, std::string> script;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object() || !record.contains("mention_id") ||
        !record.contains("ordinal") || !record.contains("answer") ||
        !record["mention_id"].is_string() || !record["ordinal"].is_number_unsigned() ||
        !record["answer"].is_string()) {
      throw LoadError("mock script record needs {mention_id, ordinal, answer}", lineno);
    }
    auto key = std::make_pair(record["mention_id"].get<std::string>(),
                              record["ordinal"].get<std::size_t>());
    if (!script.emplace(key, record["answer"].get<std::string>()).second) {
      throw LoadError("duplicate mock script entry for mention '" + key.first + "' ordinal " +
                          std::to_string(key.second),
                      lineno);
    }
  }
  return MockSelector(std::move(script));
}

Selection MockSelector::select(const ChoiceQuery& query, const SelectionContext& context) {
  auto it = script_.find({context.mention_id, context.ordinal});
  if (it == script_.end()) {
    throw SelectorError(SelectorError::Kind::kScript,
                        "mock script has no answer for mention '" + context.mention_id +
                            "' ordinal " + std::to_string(context.ordinal));
  }
  return parse_response(it->second, query);
}

Selection OracleSelector::select(const ChoiceQuery& query, const SelectionContext& context) {
  auto pick = [&](std::size_t index) {
    return option_selection(query, index, ParseStatus::kExact, std::to_string(index));
  };
  const std::string gold = context.gold.value_or("");

  switch (query.kind) {
    case QueryKind::kAssessment: {
      Selection s = parse_assessment(query.options.front().label == gold ? "yes" : "no");
      return s;
    }
    case QueryKind::kEntityChoice:
      for (const auto& option : query.options) {
        if (option.label == gold) return pick(option.index);
      }
      return pick(1);
    case QueryKind::kClassChoice:
    case QueryKind::kMixedChoice:
      for (const auto& option : query.options) {
        if (query.sentinel_index() == option.index) continue;
        if (!gold.empty() && store_.is_ancestor_or_self(option.label, gold)) {
          return pick(option.index);
        }
      }
      return pick(query.sentinel_index().value_or(1));
  }
  return pick(1);
}

Selection RecordingSelector::select(const ChoiceQuery& query, const SelectionContext& context) {
  Selection s = inner_.select(query, context);
  std::string answer;
  switch (s.kind) {
    case SelectionKind::kAccept:
      answer = "yes";
      break;
    case SelectionKind::kReject:
      answer = "no";
      break;
    case SelectionKind::kOption:
    case SelectionKind::kSentinel: {
      std::ostringstream joined;
      for (std::size_t i = 0; i < s.indices.size(); ++i) joined << (i ? ", " : "") << s.indices[i];
      answer = s.indices.empty() ? std::to_string(s.index) : joined.str();
      break;
    }
  }
  std::lock_guard lock(mutex_);
  answers_[{context.mention_id, context.ordinal}] = answer;
  return s;
}

std::string RecordingSelector::script_jsonl() const {
  std::lock_guard lock(mutex_);
  std::string out;
  for (const auto& [key, answer] : answers_) {
    nlohmann::ordered_json record;
    record["mention_id"] = key.first;
    record["ordinal"] = key.second;
    record["answer"] = answer;
    out += record.dump() + "\n";
  }
  return out;
}

}  // namespace kged
