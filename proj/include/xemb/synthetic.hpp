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
#include <string>
#include <utility>
#include <vector>

#include "xemb/corpus.hpp"

namespace xemb {

/// Two artificial architectures whose opcodes are related by a random
/// bijection. Blocks of the first architecture are walks of a sparse random
/// Markov chain over its opcodes; each partner block is the token-wise image
/// under the bijection, after which every position is swapped with its right
/// neighbour with probability `noise`.
struct SyntheticConfig {
  std::size_t vocab_size = 50;
  std::size_t blocks = 2000;
  std::size_t min_len = 3;
  std::size_t max_len = 10;
  double noise = 0.1;
  std::size_t successors = 3;  // out-degree of the Markov chain
  std::size_t planted = 50;    // planted similar pairs (and as many dissimilar)
  std::uint64_t seed = 1;
  std::string arch_a = "syna";
  std::string arch_b = "synb";
};

struct SyntheticCorpus {
  std::vector<BlockPair> pairs;
  /// (token of arch_a, its counterpart in arch_b) for every opcode.
  std::vector<std::pair<std::string, std::string>> counterparts;
  /// Planted labeled pairs: counterparts (1) and random non-counterparts (-1).
  std::vector<LabeledPair> planted;
};

/// Throws Error{InvalidConfig} on an unusable configuration.
SyntheticCorpus generate_synthetic(const SyntheticConfig& cfg);

/// Writes planted pairs in the labeled instruction-pair format.
void save_labeled_instruction_pairs(const std::filesystem::path& path,
                                    std::span<const LabeledPair> pairs);

}  // namespace xemb
