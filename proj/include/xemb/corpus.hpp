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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xemb/normalizer.hpp"

namespace xemb {

using TokenId = std::uint32_t;
using Rng = std::mt19937_64;

/// A basic block: normalized tokens of one architecture, each carrying the
/// `<arch>:` prefix.
struct Block {
  std::string arch;
  std::vector<std::string> tokens;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Two semantically equivalent blocks from different architectures.
struct BlockPair {
  std::string id;
  Block first;
  Block second;

  friend bool operator==(const BlockPair&, const BlockPair&) = default;
};

struct LabeledBlockPair {
  BlockPair pair;
  int label = 1;  // 1 or -1
};

/// One line of a labeled instruction-pair file, already rendered to tokens.
struct LabeledPair {
  std::string left;
  std::string right;
  int label = 1;  // 1 or -1
};

/// Reads the line-delimited JSON corpus format. Instructions are normalized on
/// load unless the record says `"normalized": true`.
std::vector<BlockPair> load_pairs(const std::filesystem::path& path,
                                  const Normalizer& normalizer = Normalizer());

/// Writes pairs as normalized records; load_pairs(save_pairs(x)) == x.
void save_pairs(const std::filesystem::path& path, std::span<const BlockPair> pairs);

/// Corpus records with an additional top-level `"label": 1 | -1`.
std::vector<LabeledBlockPair> load_labeled_block_pairs(const std::filesystem::path& path,
                                                       const Normalizer& normalizer = Normalizer());

void save_labeled_block_pairs(const std::filesystem::path& path,
                              std::span<const LabeledBlockPair> pairs);

/// `archA<TAB>instrA<TAB>archB<TAB>instrB<TAB>label`, label in {1, -1}.
std::vector<LabeledPair> load_labeled_instruction_pairs(const std::filesystem::path& path,
                                                        const Normalizer& normalizer = Normalizer());

/// Rewrites every non-normalized record of a corpus file so that its
/// instruction texts are canonical bodies and `"normalized"` is true. Other
/// fields (such as `label`) are preserved. Returns the number of records.
std::size_t preprocess_corpus(const std::filesystem::path& in, const std::filesystem::path& out,
                              const Normalizer& normalizer = Normalizer());

/// Token table shared by all architectures. Ids are dense and assigned in
/// descending count order, ties broken lexicographically.
class Vocabulary {
 public:
  struct Entry {
    std::string token;
    std::uint32_t arch = 0;  // index into arch_names()
    std::uint64_t count = 0;
  };

  Vocabulary() = default;

  /// Throws Error{EmptyVocabulary} if no token reaches min_count.
  static Vocabulary build(std::span<const BlockPair> pairs, std::uint64_t min_count);
  /// Rebuilds a vocabulary from (token, count) rows already in id order.
  static Vocabulary from_counts(std::vector<std::pair<std::string, std::uint64_t>> rows);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Entry& entry(TokenId id) const { return entries_.at(id); }
  const std::string& token(TokenId id) const { return entries_.at(id).token; }
  std::optional<TokenId> find(std::string_view token) const;

  const std::vector<std::string>& arch_names() const noexcept { return arch_names_; }
  std::optional<std::uint32_t> arch_index(std::string_view arch) const;
  const std::string& arch_of(TokenId id) const { return arch_names_.at(entries_.at(id).arch); }
  std::uint64_t arch_total(std::uint32_t arch) const { return arch_totals_.at(arch); }

  /// Ids of the block's in-vocabulary tokens, unknown ones skipped.
  std::vector<TokenId> encode(const Block& block) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_and_counts() == b.tokens_and_counts();
  }

 private:
  std::vector<std::pair<std::string, std::uint64_t>> tokens_and_counts() const;
  void index_entries();

  std::vector<Entry> entries_;
  std::unordered_map<std::string, TokenId> index_;
  std::vector<std::string> arch_names_;
  std::vector<std::uint64_t> arch_totals_;
};

/// Architecture prefix of a token ("x86" for "x86:ret"), or empty.
std::string_view token_arch(std::string_view token);

/// word2vec keep rule for subsampling frequent tokens:
/// min(1, (sqrt(f/t) + 1) * t/f) with f = count / arch_total.
double keep_probability(std::uint64_t count, std::uint64_t arch_total, double rate);

/// Unigram^0.75 negative sampling, one table per architecture.
class NegativeSampler {
 public:
  static constexpr double kPower = 0.75;

  explicit NegativeSampler(const Vocabulary& vocab, double power = kPower);

  /// Throws Error{UnknownArchitecture} when the architecture has no tokens.
  TokenId sample(std::string_view arch, Rng& rng) const;
  TokenId sample(std::uint32_t arch_index, Rng& rng) const;

  /// Number of distinct tokens that can be drawn for the architecture.
  std::size_t support(std::uint32_t arch_index) const;

 private:
  struct Table {
    std::vector<TokenId> ids;
    std::vector<double> cumulative;
  };

  std::vector<std::string> arch_names_;
  std::vector<Table> tables_;
};

}  // namespace xemb
