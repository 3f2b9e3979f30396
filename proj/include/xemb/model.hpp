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
#include <functional>
#include <span>
#include <vector>

#include "xemb/corpus.hpp"

namespace xemb {

/// Hyperparameters of the joint objective. Defaults are the published
/// training configuration.
struct TrainConfig {
  std::size_t dim = 200;
  std::size_t window = 5;
  std::size_t epochs = 10;
  double learning_rate = 0.05;
  std::size_t negatives = 30;
  double subsample = 1e-5;
  double gamma = 1.0;  // weight of the mono-architecture component
  double beta = 4.0;   // weight of the cross-architecture component
  std::uint64_t min_count = 5;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  bool dynamic_window = false;
  bool include_aligned_center = false;

  /// Throws Error{InvalidConfig} naming the first violated bound.
  void validate() const;
  /// Stable FNV-1a digest of every field; stored in model files.
  std::uint64_t hash() const;
};

/// Input (published embeddings) and output (target-side) weight matrices over
/// one shared vocabulary. Rows are contiguous, row-major.
template <typename Real>
class BasicEmbeddingModel {
 public:
  using value_type = Real;

  BasicEmbeddingModel() = default;

  /// Input rows uniform on (-0.5/dim, 0.5/dim), output rows zero.
  static BasicEmbeddingModel init(Vocabulary vocab, std::size_t dim, std::uint64_t seed);
  /// Wraps explicit matrices (each vocab.size() * dim values).
  static BasicEmbeddingModel from_matrices(Vocabulary vocab, std::size_t dim,
                                           std::vector<Real> input, std::vector<Real> output);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vocab_.size(); }
  const Vocabulary& vocab() const noexcept { return vocab_; }

  std::span<Real> input_row(TokenId id) { return {input_.data() + std::size_t{id} * dim_, dim_}; }
  std::span<const Real> input_row(TokenId id) const {
    return {input_.data() + std::size_t{id} * dim_, dim_};
  }
  std::span<Real> output_row(TokenId id) { return {output_.data() + std::size_t{id} * dim_, dim_}; }
  std::span<const Real> output_row(TokenId id) const {
    return {output_.data() + std::size_t{id} * dim_, dim_};
  }

  const std::vector<Real>& input() const noexcept { return input_; }
  const std::vector<Real>& output() const noexcept { return output_; }
  std::vector<Real>& input() noexcept { return input_; }
  std::vector<Real>& output() noexcept { return output_; }

  std::uint64_t config_hash() const noexcept { return config_hash_; }
  std::uint32_t epochs_completed() const noexcept { return epochs_completed_; }
  void set_training_metadata(std::uint64_t config_hash, std::uint32_t epochs) {
    config_hash_ = config_hash;
    epochs_completed_ = epochs;
  }

  friend bool operator==(const BasicEmbeddingModel&, const BasicEmbeddingModel&) = default;

 private:
  Vocabulary vocab_;
  std::size_t dim_ = 0;
  std::vector<Real> input_;
  std::vector<Real> output_;
  std::uint64_t config_hash_ = 0;
  std::uint32_t epochs_completed_ = 0;
};

using EmbeddingModel = BasicEmbeddingModel<float>;
/// 64-bit variant used for gradient checking.
using EmbeddingModel64 = BasicEmbeddingModel<double>;

/// Linear alignment link: floor(i * len_n / len_m), clamped to [0, len_n).
std::size_t align(std::size_t i, std::size_t len_m, std::size_t len_n);

/// One stochastic update of one summand of the joint objective.
struct TrainingStep {
  TokenId target = 0;
  std::span<const TokenId> context;
  double weight = 1.0;  // gamma or beta
  double alpha = 0.0;   // current learning rate
};

/// Negative-sampling CBOW loss with h = mean of context input rows:
///   -log s(u_t . h) - sum_neg log s(-u_n . h)
/// Throws Error{EmptyContext}.
template <typename Real>
double step_loss(const BasicEmbeddingModel<Real>& model, TokenId target,
                 std::span<const TokenId> context, std::span<const TokenId> negatives);

/// Dense gradient of step_loss with respect to both matrices.
struct StepGradient {
  std::vector<double> input;   // V * dim
  std::vector<double> output;  // V * dim
};

template <typename Real>
StepGradient step_gradient(const BasicEmbeddingModel<Real>& model, TokenId target,
                           std::span<const TokenId> context, std::span<const TokenId> negatives);

/// Applies one SGD update of step_loss with the given rate. All gradients are
/// taken at the pre-update point. Returns the pre-update loss.
template <typename Real>
double apply_step(BasicEmbeddingModel<Real>& model, TokenId target,
                  std::span<const TokenId> context, std::span<const TokenId> negatives,
                  double rate);

/// Draws `negatives` same-architecture negatives for the target (redrawing on
/// collision) and applies one update with rate weight*alpha. A zero weight
/// leaves the model untouched. Returns the pre-update loss.
template <typename Real>
double cbow_step(BasicEmbeddingModel<Real>& model, const TrainingStep& step,
                 const NegativeSampler& sampler, std::size_t negatives, Rng& rng);

struct PassResult {
  double loss = 0.0;
  std::size_t steps = 0;
};

/// Same-architecture CBOW over one block (after subsampling) with weight gamma.
template <typename Real>
PassResult mono_pass(BasicEmbeddingModel<Real>& model, std::span<const TokenId> block,
                     const TrainConfig& cfg, const NegativeSampler& sampler, Rng& rng,
                     double alpha);

/// Cross-architecture CBOW over an aligned pair with weight beta: every token
/// of one block is predicted from the window around its aligned position in
/// the other block, in both directions.
template <typename Real>
PassResult multi_pass(BasicEmbeddingModel<Real>& model, std::span<const TokenId> first,
                      std::span<const TokenId> second, const TrainConfig& cfg,
                      const NegativeSampler& sampler, Rng& rng, double alpha);

struct TrainReport {
  struct Epoch {
    double mono_loss = 0.0;   // mean step loss of the mono component
    double multi_loss = 0.0;  // mean step loss of the cross component
    std::size_t mono_steps = 0;
    std::size_t multi_steps = 0;
    double final_alpha = 0.0;

    friend bool operator==(const Epoch&, const Epoch&) = default;
  };
  std::vector<Epoch> epochs;

  friend bool operator==(const TrainReport&, const TrainReport&) = default;
};

/// Callback invoked after each epoch (for progress output).
using EpochCallback = std::function<void(std::size_t epoch, const TrainReport::Epoch& stats)>;

/// Runs the joint training loop. Throws Error{ConfigMismatch} if the model's
/// dimension disagrees with cfg or a pair's tokens resolve to no vocabulary.
template <typename Real>
TrainReport train(BasicEmbeddingModel<Real>& model, std::span<const BlockPair> pairs,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});

// Binary model files: "XAEM", u32 version, u32 dim, u32 V, u64 config hash,
// u32 epochs, vocabulary (u32 length, bytes, u64 count per token), then the
// input and output matrices as little-endian float32 rows.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const EmbeddingModel& model, const std::filesystem::path& path);
/// Throws Error{CorruptFile} or Error{IncompatibleVersion}.
EmbeddingModel load_model(const std::filesystem::path& path);

/// `V d` header, then one line per token: token text and d decimals.
void export_text(const EmbeddingModel& model, const std::filesystem::path& path);

}  // namespace xemb
