// Copyright 2026 The llaca Authors
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

#ifndef LLACA_ERRORS_HPP_
#define LLACA_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace llaca {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration: out-of-range knobs, malformed templates. Exit code 1.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Bad input data: ingestion, TSV parsing, gold/prediction misalignment.
// Exit code 2.
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

// Upstream LLM service failed us completely (all batches empty after
// retries and validation). Exit code 3.
class UpstreamError : public Error {
 public:
  explicit UpstreamError(const std::string& msg) : Error(msg) {}
};

// Invalid UTF-8 in an input file; carries the byte offset of the first
// offending byte.
class Utf8Error : public DataError {
 public:
  Utf8Error(const std::string& msg, std::size_t byte_offset)
      : DataError(msg), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace llaca

#endif  // LLACA_ERRORS_HPP_
