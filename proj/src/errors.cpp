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

#include "motimem/errors.hpp"

namespace motimem {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParams:
      return "InvalidParams";
    case ErrorKind::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::kEmptyStream:
      return "EmptyStream";
    case ErrorKind::kTooShort:
      return "TooShort";
    case ErrorKind::kMisaligned:
      return "Misaligned";
    case ErrorKind::kParseError:
      return "ParseError";
    case ErrorKind::kUnsupportedMaxval:
      return "UnsupportedMaxval";
    case ErrorKind::kBadMagic:
      return "BadMagic";
    case ErrorKind::kUnsupportedVersion:
      return "UnsupportedVersion";
    case ErrorKind::kLengthMismatch:
      return "LengthMismatch";
    case ErrorKind::kOrderError:
      return "OrderError";
    case ErrorKind::kAlignmentError:
      return "AlignmentError";
    case ErrorKind::kIo:
      return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

Error Error::at_offset(ErrorKind kind, std::uint64_t offset,
                       const std::string& message) {
  Error e(kind, message + " (at byte offset " + std::to_string(offset) + ")");
  e.offset_ = offset;
  return e;
}

Error Error::at_line(ErrorKind kind, std::uint64_t line,
                     const std::string& message) {
  Error e(kind, message + " (line " + std::to_string(line) + ")");
  e.line_ = line;
  return e;
}

Error Error::with_context(const std::string& context) const {
  Error e = *this;
  static_cast<std::runtime_error&>(e) =
      std::runtime_error(context + ": " + what());
  return e;
}

}  // namespace motimem
