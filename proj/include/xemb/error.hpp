// Copyright 2026 The xemb Authors. All Rights Reserved.
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

#include <stdexcept>
#include <string>
#include <string_view>

namespace xemb {

enum class ErrorCode {
  // normalizer
  EmptyInstruction,
  UnbalancedBrackets,
  InvalidArchitecture,
  // corpus
  MalformedRecord,
  ArchMismatch,
  EmptyBlock,
  EmptyVocabulary,
  UnknownArchitecture,
  // model
  EmptyContext,
  ConfigMismatch,
  InvalidConfig,
  IncompatibleVersion,
  CorruptFile,
  // eval
  ZeroVector,
  DimensionMismatch,
  UnknownToken,
  EmptySide,
  AllTokensUnknown,
  // i/o
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The code identifies the contract that
/// was violated; the message carries the detail (file, line, token, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A data error tied to a location in an input file.
class RecordError : public Error {
 public:
  RecordError(ErrorCode code, std::string file, std::size_t line, const std::string& detail);

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace xemb
