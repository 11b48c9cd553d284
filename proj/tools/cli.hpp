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

#ifndef KGED_TOOLS_CLI_HPP_
#define KGED_TOOLS_CLI_HPP_

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace kged::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kDataError = 3,
  kBackendError = 4,
};

// Flags shared by `run`, `eval` and `warm-cache`. Relative paths resolve
// against `workspace`.
struct RunConfig {
  std::filesystem::path workspace = ".";
  std::filesystem::path kg_snapshot;
  std::vector<std::filesystem::path> datasets;
  std::string backend = "mock";   // http | mock | oracle
  std::string pipeline = "kg";    // kg | baseline
  std::size_t k_max = 10;
  std::size_t desc_limit = 250;
  std::size_t context_window = 2000;
  std::size_t max_in_flight = 1;
  std::filesystem::path output_dir = "out";
  bool offline = false;
  std::string template_version = "v1";

  std::filesystem::path mock_script;
  std::filesystem::path description_cache;
  std::filesystem::path error_tags;
  std::filesystem::path record_script;
  bool baseline_descriptions = false;
  bool multi_select = false;
  bool tsv = false;

  // HTTP selector.
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-3.5-turbo-1106";
  std::string api_key_env = "OPENAI_API_KEY";
  int max_retries = 3;
  long min_request_interval_ms = 0;

  // Description endpoint.
  std::string kb_url_template = "https://en.wikipedia.org/api/rest_v1/page/summary/{entity}";
  std::string kb_field_path = "extract";

  std::filesystem::path resolve(const std::filesystem::path& p) const {
    return p.empty() || p.is_absolute() ? p : workspace / p;
  }
};

// Entry point used by the `kged` binary and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kged::cli

#endif  // KGED_TOOLS_CLI_HPP_
