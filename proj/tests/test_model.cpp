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

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "test_util.hpp"
#include "xemb/error.hpp"
#include "xemb/model.hpp"

using namespace xemb;
using xemb::test::read_file;
using xemb::test::TempDir;
using xemb::test::write_file;

namespace {

std::vector<BlockPair> toy_corpus(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> op(0, 7), len(2, 6);
  std::vector<BlockPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    BlockPair p{"p" + std::to_string(i), {"x86", {}}, {"arm", {}}};
    for (int k = len(rng); k > 0; --k) {
      const int o = op(rng);
      p.first.tokens.push_back("x86:op" + std::to_string(o));
      p.second.tokens.push_back("arm:op" + std::to_string(o));
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 3;
  cfg.negatives = 3;
  cfg.min_count = 1;
  cfg.subsample = 1e-3;
  return cfg;
}

ErrorCode load_error(const std::filesystem::path& p) {
  try {
    load_model(p);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("align is the clamped linear map") {
  CHECK(align(0, 4, 4) == 0);
  CHECK(align(3, 4, 4) == 3);
  CHECK(align(1, 4, 2) == 0);
  CHECK(align(3, 4, 2) == 1);
  CHECK(align(1, 2, 5) == 2);
  for (std::size_t m = 1; m < 12; ++m) {
    for (std::size_t n = 1; n < 12; ++n) {
      for (std::size_t i = 0; i < m; ++i) {
        CHECK(align(i, m, n) == i * n / m);
        CHECK(align(i, m, n) < n);
      }
    }
  }
}

TEST_CASE("config validation and hashing") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.dim == 200);
  CHECK(cfg.window == 5);
  CHECK(cfg.negatives == 30);
  CHECK(cfg.beta == 4.0);
  auto bad = cfg;
  bad.dim = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = cfg;
  bad.learning_rate = -1;
  CHECK_THROWS_AS(bad.validate(), Error);
  auto other = cfg;
  other.seed = 2;
  CHECK(other.hash() != cfg.hash());
  CHECK(TrainConfig{}.hash() == cfg.hash());
}

TEST_CASE("init draws input rows inside the open interval, output zero") {
  const auto m = EmbeddingModel::init(oracle::two_arch_vocab(40), 16, 9);
  const float bound = 0.5f / 16;
  for (float x : m.input()) CHECK(std::abs(x) < bound);
  for (float x : m.output()) CHECK(x == 0.0f);
  CHECK(m == EmbeddingModel::init(oracle::two_arch_vocab(40), 16, 9));
  CHECK_FALSE(m == EmbeddingModel::init(oracle::two_arch_vocab(40), 16, 10));
}

TEST_CASE("zero-init loss is (k+1) ln 2") {
  const auto m = EmbeddingModel::init(oracle::two_arch_vocab(60), 200, 1);
  Rng rng(5);
  std::uniform_int_distribution<TokenId> id(0, 59);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TokenId> ctx(1 + trial % 10), negs(30);
    for (auto& c : ctx) c = id(rng);
    for (auto& n : negs) n = id(rng);
    CHECK(std::abs(step_loss(m, id(rng), ctx, negs) - 31 * std::log(2.0)) < 1e-9);
  }
}

TEST_CASE("step_loss matches a 50-digit oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = oracle::random_model64(20, 8, rng, 2.0);
    std::uniform_int_distribution<TokenId> id(0, 19);
    std::vector<TokenId> ctx(1 + trial % 6), negs(trial % 5);
    for (auto& c : ctx) c = id(rng);
    for (auto& n : negs) n = id(rng);
    const TokenId t = id(rng);
    const double want = oracle::loss_mp(m, t, ctx, negs).convert_to<double>();
    CHECK(std::abs(step_loss(m, t, ctx, negs) - want) < 1e-12 * std::max(1.0, want));
  }
}

TEST_CASE("analytic gradient matches finite differences") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = oracle::random_model64(20, 8, rng);
    std::uniform_int_distribution<TokenId> id(0, 19);
    std::vector<TokenId> ctx(1 + trial % 5), negs(1 + trial % 4);
    for (auto& c : ctx) c = id(rng);
    for (auto& n : negs) n = id(rng);
    CHECK(oracle::fd_max_rel_error(m, id(rng), ctx, negs, 1e-5, 1e-5) < 1e-4);
  }
}

TEST_CASE("apply_step is one gradient step at the old point") {
  Rng rng(29);
  auto m = oracle::random_model64(20, 8, rng);
  const std::vector<TokenId> ctx = {1, 3, 3, 5};
  const std::vector<TokenId> negs = {2, 4, 0};
  const TokenId target = 6;
  const auto before = m;
  const auto g = step_gradient(m, target, ctx, negs);
  const double rate = 0.125;
  const double loss = apply_step(m, target, ctx, negs, rate);
  CHECK(loss == step_loss(before, target, ctx, negs));
  for (std::size_t i = 0; i < m.input().size(); ++i) {
    CHECK(m.input()[i] == doctest::Approx(before.input()[i] - rate * g.input[i]).epsilon(1e-12));
    CHECK(m.output()[i] ==
          doctest::Approx(before.output()[i] - rate * g.output[i]).epsilon(1e-12));
  }
  CHECK(step_loss(m, target, ctx, negs) < loss);
  CHECK_THROWS_AS(step_loss(m, target, std::span<const TokenId>{}, negs), Error);
}

TEST_CASE("cbow_step draws same-architecture negatives and honours zero weight") {
  Rng rng(31);
  auto m = oracle::random_model64(20, 8, rng);
  const NegativeSampler sampler(m.vocab());
  const std::vector<TokenId> ctx = {2, 4};
  auto copy = m;
  TrainingStep step{0, ctx, 0.0, 0.05};
  Rng r1(1);
  cbow_step(copy, step, sampler, 5, r1);
  CHECK(copy == m);

  // Only rows of the target's architecture (even ids here: x86) and the
  // context may change.
  step.weight = 1.0;
  step.target = 1;  // arm
  Rng r2(2);
  cbow_step(copy, step, sampler, 8, r2);
  for (TokenId id = 0; id < 20; ++id) {
    const auto a = copy.output_row(id);
    const auto b = m.output_row(id);
    const bool changed = !std::equal(a.begin(), a.end(), b.begin());
    if (changed) CHECK(m.vocab().arch_of(id) == "arm");
  }
}

TEST_CASE("training is deterministic with one worker and lowers the loss") {
  const auto pairs = toy_corpus(200, 4);
  const auto cfg = small_config();
  auto a = EmbeddingModel::init(Vocabulary::build(pairs, 1), cfg.dim, cfg.seed);
  auto b = a;
  const auto ra = train(a, pairs, cfg);
  const auto rb = train(b, pairs, cfg);
  CHECK(ra == rb);
  CHECK(a == b);
  REQUIRE(ra.epochs.size() == 3);
  CHECK(ra.epochs.back().multi_loss < ra.epochs.front().multi_loss);
  CHECK(a.epochs_completed() == 3);
  CHECK(a.config_hash() == cfg.hash());
  CHECK(ra.epochs.back().final_alpha < ra.epochs.front().final_alpha);
  CHECK(ra.epochs.back().final_alpha >= cfg.learning_rate * 1e-4);
}

TEST_CASE("train rejects mismatched models") {
  const auto pairs = toy_corpus(20, 4);
  auto cfg = small_config();
  auto m = EmbeddingModel::init(Vocabulary::build(pairs, 1), 4, 1);
  CHECK_THROWS_AS(train(m, pairs, cfg), Error);
  auto other = EmbeddingModel::init(Vocabulary::build(toy_corpus(20, 5), 1), cfg.dim, 1);
  bool mismatch = false;
  try {
    train(other, pairs, cfg);
  } catch (const Error& e) {
    mismatch = e.code() == ErrorCode::ConfigMismatch;
  }
  CHECK(mismatch);
}

TEST_CASE("zero epochs leave the initial model") {
  const auto pairs = toy_corpus(20, 4);
  auto cfg = small_config();
  cfg.epochs = 0;
  auto m = EmbeddingModel::init(Vocabulary::build(pairs, 1), cfg.dim, 1);
  const auto fresh = m;
  CHECK(train(m, pairs, cfg).epochs.empty());
  CHECK(m.input() == fresh.input());
  CHECK(m.output() == fresh.output());
}

TEST_CASE("parallel training stays finite and useful") {
  const auto pairs = toy_corpus(400, 8);
  auto cfg = small_config();
  cfg.workers = 4;
  auto m = EmbeddingModel::init(Vocabulary::build(pairs, 1), cfg.dim, 1);
  const auto report = train(m, pairs, cfg);
  for (float x : m.input()) CHECK(std::isfinite(x));
  CHECK(report.epochs.back().multi_loss < report.epochs.front().multi_loss);
}

TEST_CASE("model files round-trip bit-exactly") {
  TempDir dir;
  const auto pairs = toy_corpus(50, 4);
  auto cfg = small_config();
  auto m = EmbeddingModel::init(Vocabulary::build(pairs, 1), cfg.dim, 1);
  train(m, pairs, cfg);
  save_model(m, dir / "m.bin");
  const auto back = load_model(dir / "m.bin");
  CHECK(back == m);
  save_model(back, dir / "m2.bin");
  CHECK(read_file(dir / "m.bin") == read_file(dir / "m2.bin"));

  const std::string bytes = read_file(dir / "m.bin");
  CHECK(bytes.substr(0, 4) == "XAEM");
  // Matrices are the tail: 2 * V * d little-endian floats.
  const std::size_t tail = 2 * m.size() * m.dim() * 4;
  float first = 0;
  std::memcpy(&first, bytes.data() + bytes.size() - tail, 4);
  CHECK(first == m.input()[0]);
}

TEST_CASE("corrupt and incompatible model files") {
  TempDir dir;
  auto m = EmbeddingModel::init(oracle::two_arch_vocab(10), 4, 1);
  save_model(m, dir / "m.bin");
  const std::string good = read_file(dir / "m.bin");

  write_file(dir / "magic.bin", "XAEN" + good.substr(4));
  CHECK(load_error(dir / "magic.bin") == ErrorCode::CorruptFile);

  std::string version = good;
  version[4] = 2;
  write_file(dir / "version.bin", version);
  CHECK(load_error(dir / "version.bin") == ErrorCode::IncompatibleVersion);

  write_file(dir / "short.bin", good.substr(0, good.size() - 3));
  CHECK(load_error(dir / "short.bin") == ErrorCode::CorruptFile);

  write_file(dir / "long.bin", good + "x");
  CHECK(load_error(dir / "long.bin") == ErrorCode::CorruptFile);

  std::string huge = good;
  huge[12] = '\xff';
  huge[13] = '\xff';
  huge[14] = '\xff';
  huge[15] = '\x7f';
  write_file(dir / "huge.bin", huge);
  CHECK(load_error(dir / "huge.bin") == ErrorCode::CorruptFile);

  CHECK(load_error(dir / "missing.bin") == ErrorCode::IoError);
}

TEST_CASE("text export re-imports through an independent parser") {
  TempDir dir;
  std::vector<std::pair<std::string, std::uint64_t>> rows = {
      {"x86:mov qword ptr [rbp-0],rdi", 5}, {"arm:push {r4,lr}", 3}, {"x86:ret", 1}};
  Rng rng(3);
  std::uniform_real_distribution<float> u(-2, 2);
  std::vector<float> in(3 * 5), out(3 * 5, 0.0f);
  for (auto& x : in) x = u(rng);
  const auto m =
      EmbeddingModel::from_matrices(Vocabulary::from_counts(rows), 5, in, out);
  export_text(m, dir / "v.txt");

  std::istringstream text(read_file(dir / "v.txt"));
  std::string line;
  std::getline(text, line);
  CHECK(line == "3 5");
  for (std::size_t r = 0; r < 3; ++r) {
    REQUIRE(std::getline(text, line));
    // Tokens may contain spaces: the last d fields are the numbers.
    std::vector<std::string> fields;
    std::istringstream ls(line);
    for (std::string f; ls >> f;) fields.push_back(f);
    REQUIRE(fields.size() > 5);
    std::string token;
    for (std::size_t i = 0; i + 5 < fields.size(); ++i) token += (i ? " " : "") + fields[i];
    CHECK(token == rows[r].first);
    for (std::size_t k = 0; k < 5; ++k) {
      const std::string& f = fields[fields.size() - 5 + k];
      float v = 0;
      std::from_chars(f.data(), f.data() + f.size(), v);
      CHECK(v == in[r * 5 + k]);
    }
  }
}
