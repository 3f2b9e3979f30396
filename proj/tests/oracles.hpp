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

// Reference implementations used to check the library. They share no code
// with it beyond the model container.

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "xemb/model.hpp"

namespace xemb::oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

// Vocabulary of `v` tokens split over two architectures, counts descending.
inline Vocabulary two_arch_vocab(std::size_t v) {
  std::vector<std::pair<std::string, std::uint64_t>> rows;
  for (std::size_t i = 0; i < v; ++i) {
    rows.emplace_back((i % 2 ? "arm:t" : "x86:t") + std::to_string(i), 1000 - i);
  }
  return Vocabulary::from_counts(std::move(rows));
}

// Both matrices filled uniformly from [-scale, scale].
inline EmbeddingModel64 random_model64(std::size_t v, std::size_t dim, std::mt19937_64& rng,
                                       double scale = 0.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> in(v * dim), out(v * dim);
  for (auto& x : in) x = u(rng);
  for (auto& x : out) x = u(rng);
  return EmbeddingModel64::from_matrices(two_arch_vocab(v), dim, std::move(in), std::move(out));
}

// -log s(u_t.h) - sum log s(-u_n.h), h = mean context row, in 50-digit floats.
template <typename Real>
Big loss_mp(const BasicEmbeddingModel<Real>& m, TokenId target, std::span<const TokenId> ctx,
            std::span<const TokenId> negs) {
  const std::size_t d = m.dim();
  std::vector<Big> h(d, Big(0));
  for (TokenId c : ctx) {
    for (std::size_t k = 0; k < d; ++k) h[k] += Big(m.input_row(c)[k]);
  }
  for (auto& x : h) x /= Big(ctx.size());
  auto dot = [&](TokenId id) {
    Big s = 0;
    for (std::size_t k = 0; k < d; ++k) s += Big(m.output_row(id)[k]) * h[k];
    return s;
  };
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  Big loss = log(Big(1) + exp(-dot(target)));
  for (TokenId n : negs) loss += log(Big(1) + exp(dot(n)));
  return loss;
}

// Central finite differences of step_loss over every parameter; returns the
// largest |a - n| / max(|a|, |n|, floor) against the analytic gradient.
inline double fd_max_rel_error(EmbeddingModel64& m, TokenId target, std::span<const TokenId> ctx,
                               std::span<const TokenId> negs, double eps, double floor) {
  const StepGradient g = step_gradient(m, target, ctx, negs);
  double worst = 0.0;
  auto probe = [&](std::vector<double>& params, const std::vector<double>& analytic) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double saved = params[i];
      params[i] = saved + eps;
      const double up = step_loss(m, target, ctx, negs);
      params[i] = saved - eps;
      const double down = step_loss(m, target, ctx, negs);
      params[i] = saved;
      const double numeric = (up - down) / (2 * eps);
      const double a = analytic[i];
      const double denom = std::max({std::abs(a), std::abs(numeric), floor});
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
  };
  probe(m.input(), g.input);
  probe(m.output(), g.output);
  return worst;
}

// Fraction of (positive, negative) pairs won by the positive, ties half.
inline double brute_force_auc(std::span<const double> pos, std::span<const double> neg) {
  double wins = 0.0;
  for (double p : pos) {
    for (double n : neg) wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  }
  return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

}  // namespace xemb::oracle
