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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xemb/corpus.hpp"
#include "xemb/error.hpp"
#include "xemb/model.hpp"

namespace xemb {

/// Cosine similarity. Throws Error{DimensionMismatch} or Error{ZeroVector}.
template <typename A, typename B>
double cosine(std::span<const A> a, std::span<const B> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i];
    const double y = b[i];
    ab += x * y;
    aa += x * x;
    bb += y * y;
  }
  if (aa == 0.0 || bb == 0.0) throw Error(ErrorCode::ZeroVector, "cosine of a zero vector");
  const double c = ab / (std::sqrt(aa) * std::sqrt(bb));
  return std::clamp(c, -1.0, 1.0);
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  return cosine(std::span<const double>(a), std::span<const double>(b));
}

struct Neighbor {
  TokenId id = 0;
  std::string token;
  double score = 0.0;
};

/// Top-k tokens by cosine against the query's input embedding, excluding the
/// query, optionally restricted to one architecture. Ties go to the lower id.
/// Throws Error{UnknownToken}.
std::vector<Neighbor> nearest(const EmbeddingModel& model, std::string_view query, std::size_t k,
                              std::optional<std::string> arch_filter = std::nullopt);

/// Cosine of two tokens' input embeddings. Throws Error{UnknownToken}.
double token_similarity(const EmbeddingModel& model, std::string_view a, std::string_view b);

/// Fraction of counterpart links recovered: for every (a, b) the query a must
/// list b among its top-k neighbours restricted to b's architecture, and vice
/// versa. Both directions count. Links with an unknown token count as misses.
double retrieval_accuracy(const EmbeddingModel& model,
                          std::span<const std::pair<std::string, std::string>> counterparts,
                          std::size_t k);

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr) from (0,0) to (1,1)
  double auc = 0.0;
};

/// Mann-Whitney AUC (average ranks for ties) plus the threshold-sweep curve.
/// Throws Error{EmptySide}.
RocCurve roc_auc(std::span<const double> pos_scores, std::span<const double> neg_scores);

/// Trapezoidal area under a curve's points.
double trapezoid_area(std::span<const std::pair<double, double>> points);

/// `fpr<TAB>tpr` lines followed by `AUC<TAB><value>`.
void write_roc(std::ostream& out, const RocCurve& roc);

struct EvalReport {
  std::size_t pairs = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::vector<std::string> excluded;  // one description per excluded pair
  RocCurve roc;

  nlohmann::json to_json() const;
};

/// Scores each labeled instruction pair by cosine; pairs with an unknown token
/// are excluded and listed. Throws Error{EmptySide} after exclusions.
EvalReport eval_instruction_pairs(const EmbeddingModel& model, std::span<const LabeledPair> pairs);

/// Sum of the input embeddings of the block's in-vocabulary tokens.
/// Throws Error{AllTokensUnknown}.
std::vector<double> embed_block(const EmbeddingModel& model, const Block& block);

EvalReport eval_block_pairs(const EmbeddingModel& model, std::span<const LabeledBlockPair> pairs);

/// Instruction, constant, string, call and branch counts of a block.
struct BlockFeatureVector {
  std::array<std::uint64_t, 5> counts{};

  std::uint64_t instructions() const { return counts[0]; }
  std::uint64_t constants() const { return counts[1]; }
  std::uint64_t strings() const { return counts[2]; }
  std::uint64_t calls() const { return counts[3]; }
  std::uint64_t branches() const { return counts[4]; }

  friend bool operator==(const BlockFeatureVector&, const BlockFeatureVector&) = default;
};

/// Throws Error{EmptyBlock} for an empty block.
BlockFeatureVector baseline_features(const Block& block,
                                     const LexiconRegistry& lexicons = LexiconRegistry::builtin());

/// Feature-count comparator: cosine of the two blocks' feature vectors.
double baseline_score(const BlockFeatureVector& a, const BlockFeatureVector& b);

EvalReport eval_block_pairs_baseline(std::span<const LabeledBlockPair> pairs,
                                     const LexiconRegistry& lexicons = LexiconRegistry::builtin());

}  // namespace xemb
