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

#include "xemb/error.hpp"

namespace xemb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInstruction: return "EmptyInstruction";
    case ErrorCode::UnbalancedBrackets: return "UnbalancedBrackets";
    case ErrorCode::InvalidArchitecture: return "InvalidArchitecture";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::ArchMismatch: return "ArchMismatch";
    case ErrorCode::EmptyBlock: return "EmptyBlock";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::UnknownArchitecture: return "UnknownArchitecture";
    case ErrorCode::EmptyContext: return "EmptyContext";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IncompatibleVersion: return "IncompatibleVersion";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::EmptySide: return "EmptySide";
    case ErrorCode::AllTokensUnknown: return "AllTokensUnknown";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

RecordError::RecordError(ErrorCode code, std::string file, std::size_t line,
                         const std::string& detail)
    : Error(code, file + ":" + std::to_string(line) + ": " + detail),
      file_(std::move(file)),
      line_(line) {}

}  // namespace xemb
