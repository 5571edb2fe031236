// Copyright 2026 The MotiMem Authors
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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace motimem {

enum class ErrorKind {
  kInvalidParams,
  kDimensionMismatch,
  kEmptyStream,
  kTooShort,
  kMisaligned,
  kParseError,
  kUnsupportedMaxval,
  kBadMagic,
  kUnsupportedVersion,
  kLengthMismatch,
  kOrderError,
  kAlignmentError,
  kIo,
};

std::string_view to_string(ErrorKind kind);

/// Every recoverable failure in the library is reported as an Error.
/// Parse failures additionally carry the byte offset or 1-based line number
/// at which the input stopped making sense.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  static Error at_offset(ErrorKind kind, std::uint64_t offset,
                         const std::string& message);
  static Error at_line(ErrorKind kind, std::uint64_t line,
                       const std::string& message);

  /// Same error with "context: " prefixed to the message.
  Error with_context(const std::string& context) const;

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::uint64_t> offset() const noexcept { return offset_; }
  std::optional<std::uint64_t> line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::optional<std::uint64_t> offset_;
  std::optional<std::uint64_t> line_;
};

}  // namespace motimem
