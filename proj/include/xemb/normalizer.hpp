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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace xemb {

/// Lowercase ISA tag such as "x86" or "arm". Any tag made of [a-z0-9_] is
/// accepted; there is no closed set.
class Architecture {
 public:
  explicit Architecture(std::string name);

  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const Architecture&, const Architecture&) = default;
  friend auto operator<=>(const Architecture&, const Architecture&) = default;

  static bool is_valid_name(std::string_view name);

 private:
  std::string name_;
};

// Sentinels produced by normalization. They are rendered verbatim (never
// lowercased) and map to themselves on re-normalization.
inline constexpr std::string_view kStringSentinel = "<STR>";
inline constexpr std::string_view kFunctionSentinel = "FOO";
inline constexpr std::string_view kSymbolSentinel = "<TAG>";

/// Per-architecture word lists. `registers` also holds operand keywords that
/// must survive normalization untouched (size specifiers, shift names).
struct ArchLexicon {
  std::unordered_set<std::string> registers;
  std::unordered_set<std::string> call_opcodes;
  std::unordered_set<std::string> branch_opcodes;

  bool is_register(std::string_view lowered) const;
  bool is_call(std::string_view opcode) const;
  bool is_branch(std::string_view opcode) const;
};

/// Lexicons keyed by architecture name, loaded from `<arch>.registers`,
/// `<arch>.calls` and `<arch>.branches` files in one directory. Unknown
/// architectures get an empty lexicon.
class LexiconRegistry {
 public:
  LexiconRegistry() = default;

  static LexiconRegistry load_directory(const std::filesystem::path& dir);
  /// The lexicons shipped with the project (x86-64 and ARM).
  static const LexiconRegistry& builtin();

  const ArchLexicon& get(const Architecture& arch) const;
  void set(const Architecture& arch, ArchLexicon lexicon);

 private:
  std::map<std::string, ArchLexicon, std::less<>> lexicons_;
};

/// One identifier per line; `#` starts a comment; blank lines ignored.
std::unordered_set<std::string> read_word_list(const std::filesystem::path& file);

std::filesystem::path default_lexicon_dir();

struct ParsedInstruction {
  std::string opcode;
  std::vector<std::string> operands;

  friend bool operator==(const ParsedInstruction&, const ParsedInstruction&) = default;
};

enum class OperandKind {
  Register,
  Immediate,
  MemoryExpression,
  StringLiteral,
  CallTargetSymbol,
  OtherSymbol,
};

std::string_view to_string(OperandKind kind);

struct OperandToken {
  OperandKind kind;
  std::string text;
};

struct NormalizedInstruction {
  std::string opcode;
  std::vector<std::string> operands;

  friend bool operator==(const NormalizedInstruction&, const NormalizedInstruction&) = default;
};

/// Splits an Intel-syntax instruction into opcode and operands. Commas nested
/// in `[...]`, `{...}`, `(...)` or quotes do not split.
/// Throws Error{EmptyInstruction} or Error{UnbalancedBrackets}.
ParsedInstruction parse_instruction(std::string_view raw, const Architecture& arch);

OperandToken classify_operand(std::string_view text, std::string_view opcode,
                              std::size_t position, const ArchLexicon& lexicon);

/// Applies the OOV rules: numeric constants become "0" (keeping a leading
/// minus), string literals "<STR>", call targets "FOO", other symbols "<TAG>".
/// Memory expressions are rewritten leaf by leaf.
NormalizedInstruction normalize(const ParsedInstruction& parsed, const ArchLexicon& lexicon);

/// `<arch>:<opcode> <op1>,<op2>,...`, or `<arch>:<opcode>` without operands.
std::string render_token(const NormalizedInstruction& norm, const Architecture& arch);

/// Rendering without the architecture prefix.
std::string render_body(const NormalizedInstruction& norm);

/// Parse, normalize and render in one go.
class Normalizer {
 public:
  explicit Normalizer(LexiconRegistry lexicons = LexiconRegistry::builtin());

  std::string token(std::string_view raw, const Architecture& arch) const;
  std::string body(std::string_view raw, const Architecture& arch) const;
  const LexiconRegistry& lexicons() const noexcept { return lexicons_; }

 private:
  LexiconRegistry lexicons_;
};

/// Splits "arch:body" at the first colon. Returns false if there is none.
bool split_token(std::string_view token, std::string_view& arch, std::string_view& body);

}  // namespace xemb
