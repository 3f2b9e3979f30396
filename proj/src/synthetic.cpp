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

#include "xemb/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "xemb/error.hpp"

namespace xemb {

namespace {

std::string opcode_name(char prefix, std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 2) digits.insert(digits.begin(), '0');
  return std::string(1, prefix) + digits;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (cfg.vocab_size < 2) fail("synthetic vocabulary needs at least 2 opcodes");
  if (cfg.blocks < 1) fail("synthetic corpus needs at least one block");
  if (cfg.min_len < 1 || cfg.min_len > cfg.max_len) fail("invalid block length range");
  if (cfg.noise < 0.0 || cfg.noise > 1.0) fail("noise must be in [0, 1]");
  if (cfg.successors < 1 || cfg.successors > cfg.vocab_size) fail("invalid successor count");
  if (!Architecture::is_valid_name(cfg.arch_a) || !Architecture::is_valid_name(cfg.arch_b) ||
      cfg.arch_a == cfg.arch_b) {
    fail("synthetic architectures must be two distinct valid tags");
  }

  Rng rng(cfg.seed);
  const std::size_t n = cfg.vocab_size;

  std::vector<std::size_t> bijection(n);
  std::iota(bijection.begin(), bijection.end(), std::size_t{0});
  std::shuffle(bijection.begin(), bijection.end(), rng);

  std::vector<std::vector<std::size_t>> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> candidates(n);
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    std::shuffle(candidates.begin(), candidates.end(), rng);
    next[i].assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(cfg.successors));
  }

  auto token_a = [&](std::size_t i) { return cfg.arch_a + ":" + opcode_name('a', i); };
  auto token_b = [&](std::size_t i) { return cfg.arch_b + ":" + opcode_name('b', bijection[i]); };

  SyntheticCorpus corpus;
  for (std::size_t i = 0; i < n; ++i) corpus.counterparts.emplace_back(token_a(i), token_b(i));

  std::uniform_int_distribution<std::size_t> pick_len(cfg.min_len, cfg.max_len);
  std::uniform_int_distribution<std::size_t> pick_start(0, n - 1);
  std::uniform_int_distribution<std::size_t> pick_next(0, cfg.successors - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  corpus.pairs.reserve(cfg.blocks);
  std::vector<std::size_t> walk;
  for (std::size_t b = 0; b < cfg.blocks; ++b) {
    const std::size_t len = pick_len(rng);
    walk.clear();
    walk.push_back(pick_start(rng));
    while (walk.size() < len) walk.push_back(next[walk.back()][pick_next(rng)]);

    std::vector<std::size_t> image = walk;
    for (std::size_t p = 0; p + 1 < image.size(); ++p) {
      if (coin(rng) < cfg.noise) std::swap(image[p], image[p + 1]);
    }

    BlockPair pair;
    pair.id = "syn" + std::to_string(b);
    pair.first.arch = cfg.arch_a;
    pair.second.arch = cfg.arch_b;
    for (std::size_t t : walk) pair.first.tokens.push_back(token_a(t));
    for (std::size_t t : image) pair.second.tokens.push_back(token_b(t));
    corpus.pairs.push_back(std::move(pair));
  }

  const std::size_t planted = std::min(cfg.planted, n);
  std::vector<std::size_t> chosen(n);
  std::iota(chosen.begin(), chosen.end(), std::size_t{0});
  std::shuffle(chosen.begin(), chosen.end(), rng);
  chosen.resize(planted);
  for (std::size_t i : chosen) corpus.planted.push_back(LabeledPair{token_a(i), token_b(i), 1});
  std::uniform_int_distribution<std::size_t> offset(1, n - 1);
  for (std::size_t i : chosen) {
    const std::size_t j = (i + offset(rng)) % n;
    corpus.planted.push_back(LabeledPair{token_a(i), token_b(j), -1});
  }
  return corpus;
}

void save_labeled_instruction_pairs(const std::filesystem::path& path,
                                    std::span<const LabeledPair> pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  for (const auto& p : pairs) {
    std::string_view arch_l, body_l, arch_r, body_r;
    split_token(p.left, arch_l, body_l);
    split_token(p.right, arch_r, body_r);
    out << arch_l << '\t' << body_l << '\t' << arch_r << '\t' << body_r << '\t' << p.label << '\n';
  }
}

}  // namespace xemb
