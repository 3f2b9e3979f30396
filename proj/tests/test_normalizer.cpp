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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "xemb/error.hpp"
#include "xemb/normalizer.hpp"

using namespace xemb;

namespace {

const Architecture kX86{"x86"};
const Architecture kArm{"arm"};

std::string tok(std::string_view raw, const Architecture& arch) {
  static const Normalizer norm;
  return norm.token(raw, arch);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("parse_instruction splits opcode and top-level operands") {
  CHECK(parse_instruction("mov ebp, esp", kX86) == ParsedInstruction{"mov", {"ebp", "esp"}});
  CHECK(parse_instruction("bl foo", kArm) == ParsedInstruction{"bl", {"foo"}});
  CHECK(parse_instruction("ret", kX86) == ParsedInstruction{"ret", {}});
  CHECK(parse_instruction("  LDR r0, [r5, #4]  ", kArm) ==
        ParsedInstruction{"ldr", {"r0", "[r5, #4]"}});
  CHECK(parse_instruction("mov rdi, \"a, b\"", kX86) ==
        ParsedInstruction{"mov", {"rdi", "\"a, b\""}});
  CHECK(parse_instruction("push {r4, lr}", kArm) == ParsedInstruction{"push", {"{r4, lr}"}});
}

TEST_CASE("parse_instruction errors") {
  CHECK(code_of([] { parse_instruction("   ", kX86); }) == ErrorCode::EmptyInstruction);
  CHECK(code_of([] { parse_instruction("mov eax, [rbx", kX86); }) ==
        ErrorCode::UnbalancedBrackets);
  CHECK(code_of([] { parse_instruction("mov eax, rbx]", kX86); }) ==
        ErrorCode::UnbalancedBrackets);
  CHECK(code_of([] { parse_instruction("mov rdi, \"abc", kX86); }) ==
        ErrorCode::UnbalancedBrackets);
}

TEST_CASE("classify_operand") {
  const auto& lex = LexiconRegistry::builtin();
  const auto& x86 = lex.get(kX86);
  const auto& arm = lex.get(kArm);
  CHECK(classify_operand("esp", "mov", 1, x86).kind == OperandKind::Register);
  CHECK(classify_operand("ESP", "mov", 1, x86).kind == OperandKind::Register);
  CHECK(classify_operand("#16", "sub", 2, arm).kind == OperandKind::Immediate);
  CHECK(classify_operand("-0x1F", "add", 1, x86).kind == OperandKind::Immediate);
  CHECK(classify_operand("printf", "callq", 0, x86).kind == OperandKind::CallTargetSymbol);
  CHECK(classify_operand("printf", "mov", 1, x86).kind == OperandKind::OtherSymbol);
  CHECK(classify_operand(".LBB0_2", "je", 0, x86).kind == OperandKind::OtherSymbol);
  CHECK(classify_operand("[rip+.L.str]", "movq", 0, x86).kind == OperandKind::MemoryExpression);
  CHECK(classify_operand("'x'", "mov", 1, x86).kind == OperandKind::StringLiteral);
}

TEST_CASE("classify_operand is total") {
  const auto& x86 = LexiconRegistry::builtin().get(kX86);
  std::mt19937_64 rng(7);
  const std::string alphabet = "abcxyz019_.$#+-*[]:\"' <>{}()@";
  std::uniform_int_distribution<std::size_t> len(1, 12), ch(0, alphabet.size() - 1);
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    for (std::size_t n = len(rng); n > 0; --n) s.push_back(alphabet[ch(rng)]);
    const auto kind = classify_operand(s, i % 2 ? "call" : "mov", 0, x86).kind;
    const int k = static_cast<int>(kind);
    CHECK((k >= 0 && k <= static_cast<int>(OperandKind::OtherSymbol)));
  }
}

TEST_CASE("normalize: the four rules") {
  CHECK(tok("callq printf", kX86) == "x86:callq FOO");
  CHECK(tok("sub sp, sp, #16", kArm) == "arm:sub sp,sp,0");
  CHECK(tok("movq [rip+.L.str], rax", kX86) == "x86:movq [rip+<TAG>],rax");
  CHECK(tok("add eax, -5", kX86) == "x86:add eax,-0");
  CHECK(tok("mov rdi, \"x\"", kX86) == "x86:mov rdi,<STR>");
  CHECK(tok("ret", kX86) == "x86:ret");
  const auto parsed = parse_instruction("sub sp, sp, #16", kArm);
  const auto norm = normalize(parsed, LexiconRegistry::builtin().get(kArm));
  CHECK(norm == NormalizedInstruction{"sub", {"sp", "sp", "0"}});
  CHECK(render_token(norm, kArm) == "arm:sub sp,sp,0");
  CHECK(render_body(norm) == "sub sp,sp,0");
}

TEST_CASE("golden normalizer file") {
  std::ifstream in(std::string(XEMB_DATA_DIR) + "/golden/normalizer.tsv");
  REQUIRE(in);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string arch, raw, expected;
    std::getline(fields, arch, '\t');
    std::getline(fields, raw, '\t');
    std::getline(fields, expected, '\t');
    INFO(line);
    CHECK(tok(raw, Architecture(arch)) == expected);
    ++rows;
  }
  CHECK(rows >= 40);
}

TEST_CASE("idempotence on canonical tokens") {
  const char* canon[] = {"x86:callq FOO",          "arm:sub sp,sp,0",
                         "x86:movq [rip+<TAG>],rax", "x86:add eax,-0",
                         "arm:ldr r0,[r5+0]",      "arm:str r4,[r0],0",
                         "x86:mov qword ptr [rbp-0],rdi", "arm:push {r4,r5,lr}",
                         "x86:mov rdi,<STR>",      "x86:ret",
                         "x86:lea rax,[rdi+0*rsi+0]", "arm:ldr r3,<TAG>"};
  for (std::string_view t : canon) {
    std::string_view arch, body;
    REQUIRE(split_token(t, arch, body));
    CHECK(tok(body, Architecture(std::string(arch))) == t);
  }
}

TEST_CASE("fuzzed immediates keep no digit but 0") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long long> value(-1'000'000'000LL, 1'000'000'000LL);
  for (int i = 0; i < 2000; ++i) {
    const long long v = value(rng);
    std::ostringstream raw;
    const bool hex = i % 3 == 0;
    const bool hash = i % 2 == 0;
    raw << "add sp, " << (hash ? "#" : "");
    if (v < 0) raw << '-';
    if (hex) {
      raw << "0x" << std::hex << (v < 0 ? -v : v);
    } else {
      raw << (v < 0 ? -v : v);
    }
    raw << ", [sp, #" << (v % 977) << "]";
    const std::string t = tok(raw.str(), kArm);
    for (char c : t) {
      if (std::isdigit(static_cast<unsigned char>(c))) CHECK(c == '0');
    }
    CHECK(t.find(v < 0 ? ",-0," : ",0,") != std::string::npos);
  }
}

TEST_CASE("prefixing is injective") {
  CHECK(tok("push r4", kArm) != tok("push r4", Architecture("thumb")));
  std::string_view arch, body;
  REQUIRE(split_token("arm:ldr r0,[r5+0]", arch, body));
  CHECK(arch == "arm");
  CHECK(body == "ldr r0,[r5+0]");
  CHECK_FALSE(split_token("noprefix", arch, body));
}

TEST_CASE("architecture tags are validated") {
  CHECK_THROWS_AS(Architecture("X86"), Error);
  CHECK_THROWS_AS(Architecture(""), Error);
  CHECK_NOTHROW(Architecture("arm_v7"));
}

TEST_CASE("lexicons are data driven") {
  LexiconRegistry reg = LexiconRegistry::builtin();
  ArchLexicon lex = reg.get(kX86);
  lex.call_opcodes.insert("jsr");
  reg.set(kX86, lex);
  const Normalizer custom(reg);
  CHECK(custom.token("jsr helper", kX86) == "x86:jsr FOO");
  CHECK(tok("jsr helper", kX86) == "x86:jsr <TAG>");
  // Unknown architectures have empty lexicons: every identifier is a symbol.
  CHECK(tok("mov r0, r1", Architecture("mips")) == "mips:mov <TAG>,<TAG>");
}
