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

#include "xemb/normalizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "xemb/error.hpp"

#ifndef XEMB_LEXICON_DIR
#define XEMB_LEXICON_DIR "data/lexicons"
#endif

namespace xemb {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

std::string_view trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$' ||
         c == '@' || c == '?';
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$' ||
         c == '@' || c == '?';
}

bool is_quote(char c) { return c == '"' || c == '\''; }

bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), is_word_char);
}

// #?[+-]?(0x[0-9a-f]+|[0-9]+)
bool is_immediate(std::string_view s, bool& negative) {
  if (!s.empty() && s.front() == '#') s.remove_prefix(1);
  negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    return std::all_of(s.begin() + 2, s.end(),
                       [](unsigned char c) { return std::isxdigit(c) != 0; });
  }
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool is_quoted(std::string_view s) {
  return s.size() >= 2 && is_quote(s.front()) && s.back() == s.front();
}

// Returns the sentinel spelled by `s` (case-insensitive for the bracketed
// ones), or an empty view.
std::string_view as_sentinel(std::string_view s) {
  if (iequals(s, kStringSentinel)) return kStringSentinel;
  if (iequals(s, kSymbolSentinel)) return kSymbolSentinel;
  if (s == kFunctionSentinel) return kFunctionSentinel;
  return {};
}

// Rewrites a single leaf inside a compound operand.
std::string normalize_leaf(std::string_view leaf, const ArchLexicon& lexicon) {
  if (auto s = as_sentinel(leaf); !s.empty()) return std::string(s);
  if (is_quoted(leaf)) return std::string(kStringSentinel);
  bool negative = false;
  if (is_immediate(leaf, negative)) return negative ? "-0" : "0";
  std::string lowered = lowercase(leaf);
  if (lexicon.is_register(lowered)) return lowered;
  return std::string(kSymbolSentinel);
}

// Rewrites a bracketed or otherwise multi-part operand. Structural characters
// are kept; whitespace survives only as a single space between two leaves.
std::string normalize_compound(std::string_view text, const ArchLexicon& lexicon) {
  std::string out;
  bool last_was_leaf = false;
  bool pending_space = false;
  auto emit_leaf = [&](std::string_view leaf) {
    if (last_was_leaf && pending_space) out.push_back(' ');
    out += normalize_leaf(leaf, lexicon);
    last_was_leaf = true;
    pending_space = false;
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = true;
      ++i;
    } else if (is_quote(c)) {
      std::size_t end = text.find(c, i + 1);
      if (end == std::string_view::npos) end = text.size() - 1;
      emit_leaf(text.substr(i, end - i + 1));
      i = end + 1;
    } else if (c == '<' && (iequals(text.substr(i, 5), kSymbolSentinel) ||
                            iequals(text.substr(i, 5), kStringSentinel))) {
      emit_leaf(text.substr(i, 5));
      i += 5;
    } else if (c == '#') {
      std::size_t j = i + 1;
      if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
      while (j < text.size() && is_word_char(text[j])) ++j;
      emit_leaf(text.substr(i, j - i));
      i = j;
    } else if (is_word_char(c)) {
      std::size_t j = i;
      while (j < text.size() && is_word_char(text[j])) ++j;
      emit_leaf(text.substr(i, j - i));
      i = j;
    } else {
      // "dword ptr [rax]": keep the space between a keyword and its bracket.
      if (last_was_leaf && pending_space && (c == '[' || c == '{')) out.push_back(' ');
      out.push_back(c);
      last_was_leaf = false;
      pending_space = false;
      ++i;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Architecture

bool Architecture::is_valid_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::islower(c) || std::isdigit(c) || c == '_';
  });
}

Architecture::Architecture(std::string name) : name_(std::move(name)) {
  if (!is_valid_name(name_)) {
    throw Error(ErrorCode::InvalidArchitecture, "architecture tag '" + name_ + "'");
  }
}

// ---------------------------------------------------------------------------
// Lexicons

bool ArchLexicon::is_register(std::string_view lowered) const {
  return registers.contains(std::string(lowered));
}

bool ArchLexicon::is_call(std::string_view opcode) const {
  return call_opcodes.contains(std::string(opcode));
}

bool ArchLexicon::is_branch(std::string_view opcode) const {
  return branch_opcodes.contains(std::string(opcode));
}

std::unordered_set<std::string> read_word_list(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + file.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (!view.empty()) words.insert(lowercase(view));
  }
  return words;
}

std::filesystem::path default_lexicon_dir() { return XEMB_LEXICON_DIR; }

LexiconRegistry LexiconRegistry::load_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::IoError, "lexicon directory not found: " + dir.string());
  }
  LexiconRegistry registry;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto& path = entry.path();
    const std::string arch = path.stem().string();
    if (!Architecture::is_valid_name(arch)) continue;
    auto& lexicon = registry.lexicons_[arch];
    const std::string ext = path.extension().string();
    if (ext == ".registers") {
      lexicon.registers = read_word_list(path);
    } else if (ext == ".calls") {
      lexicon.call_opcodes = read_word_list(path);
    } else if (ext == ".branches") {
      lexicon.branch_opcodes = read_word_list(path);
    }
  }
  return registry;
}

const LexiconRegistry& LexiconRegistry::builtin() {
  static const LexiconRegistry registry = load_directory(default_lexicon_dir());
  return registry;
}

const ArchLexicon& LexiconRegistry::get(const Architecture& arch) const {
  static const ArchLexicon empty;
  auto it = lexicons_.find(arch.name());
  return it == lexicons_.end() ? empty : it->second;
}

void LexiconRegistry::set(const Architecture& arch, ArchLexicon lexicon) {
  lexicons_[arch.name()] = std::move(lexicon);
}

// ---------------------------------------------------------------------------
// Parsing and normalization

std::string_view to_string(OperandKind kind) {
  switch (kind) {
    case OperandKind::Register: return "register";
    case OperandKind::Immediate: return "immediate";
    case OperandKind::MemoryExpression: return "memory-expression";
    case OperandKind::StringLiteral: return "string-literal";
    case OperandKind::CallTargetSymbol: return "call-target-symbol";
    case OperandKind::OtherSymbol: return "other-symbol";
  }
  return "other-symbol";
}

ParsedInstruction parse_instruction(std::string_view raw, const Architecture& /*arch*/) {
  const std::string_view text = trim(raw);
  if (text.empty()) throw Error(ErrorCode::EmptyInstruction, "blank instruction");

  std::size_t split = 0;
  while (split < text.size() && !std::isspace(static_cast<unsigned char>(text[split]))) ++split;

  ParsedInstruction parsed;
  parsed.opcode = lowercase(text.substr(0, split));
  const std::string_view rest = trim(text.substr(split));

  std::vector<char> open;
  char quote = 0;
  std::size_t start = 0;
  auto push_operand = [&](std::size_t end) {
    auto piece = trim(rest.substr(start, end - start));
    if (!piece.empty()) parsed.operands.emplace_back(piece);
  };
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const char c = rest[i];
    if (quote != 0) {
      if (c == quote) quote = 0;
      continue;
    }
    switch (c) {
      case '"':
      case '\'':
        quote = c;
        break;
      case '[':
      case '{':
      case '(':
        open.push_back(c);
        break;
      case ']':
      case '}':
      case ')': {
        const char expected = c == ']' ? '[' : c == '}' ? '{' : '(';
        if (open.empty() || open.back() != expected) {
          throw Error(ErrorCode::UnbalancedBrackets, std::string(text));
        }
        open.pop_back();
        break;
      }
      case ',':
        if (open.empty()) {
          push_operand(i);
          start = i + 1;
        }
        break;
      default:
        break;
    }
  }
  if (quote != 0 || !open.empty()) throw Error(ErrorCode::UnbalancedBrackets, std::string(text));
  push_operand(rest.size());
  return parsed;
}

OperandToken classify_operand(std::string_view text, std::string_view opcode,
                              std::size_t /*position*/, const ArchLexicon& lexicon) {
  text = trim(text);
  OperandToken token{OperandKind::OtherSymbol, std::string(text)};
  if (auto s = as_sentinel(text); !s.empty()) {
    token.kind = s == kStringSentinel   ? OperandKind::StringLiteral
                 : s == kFunctionSentinel ? OperandKind::CallTargetSymbol
                                          : OperandKind::OtherSymbol;
    return token;
  }
  bool negative = false;
  if (is_quoted(text)) {
    token.kind = OperandKind::StringLiteral;
  } else if (is_immediate(text, negative)) {
    token.kind = OperandKind::Immediate;
  } else if (lexicon.is_register(lowercase(text))) {
    token.kind = OperandKind::Register;
  } else if (is_identifier(text)) {
    token.kind = lexicon.is_call(lowercase(opcode)) ? OperandKind::CallTargetSymbol
                                                    : OperandKind::OtherSymbol;
  } else if (std::any_of(text.begin(), text.end(), [](char c) { return !is_word_char(c); })) {
    token.kind = OperandKind::MemoryExpression;
  }
  return token;
}

NormalizedInstruction normalize(const ParsedInstruction& parsed, const ArchLexicon& lexicon) {
  NormalizedInstruction norm;
  norm.opcode = parsed.opcode;
  norm.operands.reserve(parsed.operands.size());
  for (std::size_t pos = 0; pos < parsed.operands.size(); ++pos) {
    const OperandToken token = classify_operand(parsed.operands[pos], parsed.opcode, pos, lexicon);
    switch (token.kind) {
      case OperandKind::Register:
        norm.operands.push_back(lowercase(token.text));
        break;
      case OperandKind::Immediate: {
        bool negative = false;
        is_immediate(token.text, negative);
        norm.operands.emplace_back(negative ? "-0" : "0");
        break;
      }
      case OperandKind::StringLiteral:
        norm.operands.emplace_back(kStringSentinel);
        break;
      case OperandKind::CallTargetSymbol:
        norm.operands.emplace_back(kFunctionSentinel);
        break;
      case OperandKind::OtherSymbol:
        norm.operands.emplace_back(kSymbolSentinel);
        break;
      case OperandKind::MemoryExpression:
        norm.operands.push_back(normalize_compound(token.text, lexicon));
        break;
    }
  }
  return norm;
}

std::string render_body(const NormalizedInstruction& norm) {
  std::string out = norm.opcode;
  for (std::size_t i = 0; i < norm.operands.size(); ++i) {
    out.push_back(i == 0 ? ' ' : ',');
    out += norm.operands[i];
  }
  return out;
}

std::string render_token(const NormalizedInstruction& norm, const Architecture& arch) {
  return arch.name() + ":" + render_body(norm);
}

bool split_token(std::string_view token, std::string_view& arch, std::string_view& body) {
  const auto colon = token.find(':');
  if (colon == std::string_view::npos) return false;
  arch = token.substr(0, colon);
  body = token.substr(colon + 1);
  return true;
}

Normalizer::Normalizer(LexiconRegistry lexicons) : lexicons_(std::move(lexicons)) {}

std::string Normalizer::body(std::string_view raw, const Architecture& arch) const {
  return render_body(normalize(parse_instruction(raw, arch), lexicons_.get(arch)));
}

std::string Normalizer::token(std::string_view raw, const Architecture& arch) const {
  return arch.name() + ":" + body(raw, arch);
}

}  // namespace xemb
