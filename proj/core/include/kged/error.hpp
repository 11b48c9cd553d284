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

#ifndef KGED_ERROR_HPP_
#define KGED_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kged {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `line()` is 1-based, 0 when the failure is not tied
// to a single line (e.g. a cycle spanning several records).
class LoadError : public Error {
 public:
  LoadError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Graph precondition violations: unknown nodes, cycles, pruning the root.
class GraphError : public Error {
 public:
  using Error::Error;
};

class SelectorError : public Error {
 public:
  enum class Kind {
    kCredential,        // missing or rejected credential, never retried
    kRetriesExhausted,  // transient failures outlived the retry budget
    kEnvelope,          // response body is not a chat-completion envelope
    kRequest,           // non-transient HTTP failure other than auth
    kScript,            // mock fixture has no entry for the request
  };

  SelectorError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kged

#endif  // KGED_ERROR_HPP_
