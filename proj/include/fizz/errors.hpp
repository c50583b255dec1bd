// Copyright 2026 The FIZZ Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fizz {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Input data failed structural validation (overlapping mentions, bad spans).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Network or process-level failure talking to a model backend. Retryable.
class TransportError : public Error {
 public:
  using Error::Error;
};

// A scripted fixture has no entry for the requested key.
class FixtureMissing : public Error {
 public:
  using Error::Error;
};

class NliUnavailable : public Error {
 public:
  using Error::Error;
};

class NliProtocolError : public Error {
 public:
  using Error::Error;
};

// The LLM answered but no "- " bullet could be parsed from it.
class DecompositionEmpty : public Error {
 public:
  DecompositionEmpty(std::string raw_completion, std::size_t sentence_index)
      : Error("no atomic facts parsed from completion for summary sentence " +
              std::to_string(sentence_index)),
        raw_completion_(std::move(raw_completion)),
        sentence_index_(sentence_index) {}

  const std::string& raw_completion() const noexcept { return raw_completion_; }
  std::size_t sentence_index() const noexcept { return sentence_index_; }

 private:
  std::string raw_completion_;
  std::size_t sentence_index_;
};

class DecompositionFailed : public Error {
 public:
  using Error::Error;
};

// Every atomic fact was filtered out, so no score can be produced.
class EmptyFactSet : public Error {
 public:
  using Error::Error;
};

class DegenerateLabels : public Error {
 public:
  using Error::Error;
};

class DatasetError : public Error {
 public:
  DatasetError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  // 1-based line number, 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fizz
