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

#include "xemb/model.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <thread>

#include "xemb/error.hpp"

namespace xemb {

namespace {

// log(1 + exp(x)) without overflow.
double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

template <typename Real>
double dot(std::span<const Real> a, std::span<const Real> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += static_cast<double>(a[i]) * b[i];
  return sum;
}

template <typename Real>
std::vector<double> context_mean(const BasicEmbeddingModel<Real>& model,
                                 std::span<const TokenId> context) {
  if (context.empty()) throw Error(ErrorCode::EmptyContext, "CBOW step needs at least one context token");
  std::vector<double> h(model.dim(), 0.0);
  for (TokenId c : context) {
    auto row = model.input_row(c);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] += row[i];
  }
  const double inv = 1.0 / static_cast<double>(context.size());
  for (double& x : h) x *= inv;
  return h;
}

std::uint64_t fnv1a(std::uint64_t hash, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

// Context of `center` in `seq`: up to `window` tokens on each side.
void window_context(std::span<const TokenId> seq, std::size_t center, std::size_t window,
                    bool include_center, std::vector<TokenId>& out) {
  out.clear();
  const std::size_t lo = center >= window ? center - window : 0;
  const std::size_t hi = std::min(seq.size(), center + window + 1);
  for (std::size_t j = lo; j < hi; ++j) {
    if (j != center || include_center) out.push_back(seq[j]);
  }
}

std::size_t effective_window(const TrainConfig& cfg, Rng& rng) {
  if (!cfg.dynamic_window) return cfg.window;
  return 1 + static_cast<std::size_t>(rng() % cfg.window);
}

}  // namespace

// ---------------------------------------------------------------------------
// TrainConfig

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (dim < 1) fail("dim must be >= 1");
  if (window < 1) fail("window must be >= 1");
  if (!(learning_rate > 0.0)) fail("learning rate must be > 0");
  if (negatives < 1) fail("negatives must be >= 1");
  if (!(subsample > 0.0)) fail("subsample rate must be > 0");
  if (!(gamma >= 0.0)) fail("gamma must be >= 0");
  if (!(beta >= 0.0)) fail("beta must be >= 0");
  if (!(gamma + beta > 0.0)) fail("gamma + beta must be > 0");
  if (min_count < 1) fail("min_count must be >= 1");
  if (workers < 1) fail("workers must be >= 1");
}

std::uint64_t TrainConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](auto value) { h = fnv1a(h, &value, sizeof(value)); };
  mix(static_cast<std::uint64_t>(dim));
  mix(static_cast<std::uint64_t>(window));
  mix(static_cast<std::uint64_t>(epochs));
  mix(learning_rate);
  mix(static_cast<std::uint64_t>(negatives));
  mix(subsample);
  mix(gamma);
  mix(beta);
  mix(min_count);
  mix(seed);
  mix(static_cast<std::uint64_t>(workers));
  mix(static_cast<std::uint8_t>(dynamic_window));
  mix(static_cast<std::uint8_t>(include_aligned_center));
  return h;
}

// ---------------------------------------------------------------------------
// Model

template <typename Real>
BasicEmbeddingModel<Real> BasicEmbeddingModel<Real>::init(Vocabulary vocab, std::size_t dim,
                                                          std::uint64_t seed) {
  if (vocab.empty()) throw Error(ErrorCode::EmptyVocabulary, "cannot initialize an empty model");
  if (dim < 1) throw Error(ErrorCode::InvalidConfig, "dim must be >= 1");
  BasicEmbeddingModel model;
  model.dim_ = dim;
  const std::size_t n = vocab.size() * dim;
  model.vocab_ = std::move(vocab);
  model.input_.resize(n);
  model.output_.assign(n, Real{0});
  Rng rng(seed);
  const Real bound = static_cast<Real>(0.5 / static_cast<double>(dim));
  std::uniform_real_distribution<double> uniform(-0.5 / static_cast<double>(dim),
                                                 0.5 / static_cast<double>(dim));
  for (auto& x : model.input_) {
    do {
      x = static_cast<Real>(uniform(rng));
    } while (!(std::abs(x) < bound));
  }
  return model;
}

template <typename Real>
BasicEmbeddingModel<Real> BasicEmbeddingModel<Real>::from_matrices(Vocabulary vocab,
                                                                   std::size_t dim,
                                                                   std::vector<Real> input,
                                                                   std::vector<Real> output) {
  if (input.size() != vocab.size() * dim || output.size() != vocab.size() * dim) {
    throw Error(ErrorCode::DimensionMismatch, "matrix size does not match vocabulary x dim");
  }
  BasicEmbeddingModel model;
  model.dim_ = dim;
  model.vocab_ = std::move(vocab);
  model.input_ = std::move(input);
  model.output_ = std::move(output);
  return model;
}

std::size_t align(std::size_t i, std::size_t len_m, std::size_t len_n) {
  if (len_m == 0 || len_n == 0) return 0;
  const std::size_t j = i * len_n / len_m;
  return std::min(j, len_n - 1);
}

// ---------------------------------------------------------------------------
// CBOW kernel

template <typename Real>
double step_loss(const BasicEmbeddingModel<Real>& model, TokenId target,
                 std::span<const TokenId> context, std::span<const TokenId> negatives) {
  const std::vector<double> h = context_mean(model, context);
  const std::span<const double> hv(h);
  auto score = [&](TokenId o) {
    auto row = model.output_row(o);
    double s = 0.0;
    for (std::size_t i = 0; i < hv.size(); ++i) s += static_cast<double>(row[i]) * hv[i];
    return s;
  };
  double loss = softplus(-score(target));
  for (TokenId n : negatives) loss += softplus(score(n));
  return loss;
}

template <typename Real>
StepGradient step_gradient(const BasicEmbeddingModel<Real>& model, TokenId target,
                           std::span<const TokenId> context, std::span<const TokenId> negatives) {
  const std::size_t d = model.dim();
  const std::vector<double> h = context_mean(model, context);
  StepGradient grad{std::vector<double>(model.size() * d, 0.0),
                    std::vector<double>(model.size() * d, 0.0)};
  std::vector<double> dh(d, 0.0);
  auto accumulate = [&](TokenId o, double label) {
    auto row = model.output_row(o);
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += static_cast<double>(row[i]) * h[i];
    const double g = sigmoid(s) - label;
    for (std::size_t i = 0; i < d; ++i) {
      grad.output[std::size_t{o} * d + i] += g * h[i];
      dh[i] += g * static_cast<double>(row[i]);
    }
  };
  accumulate(target, 1.0);
  for (TokenId n : negatives) accumulate(n, 0.0);
  const double inv = 1.0 / static_cast<double>(context.size());
  for (TokenId c : context) {
    for (std::size_t i = 0; i < d; ++i) grad.input[std::size_t{c} * d + i] += dh[i] * inv;
  }
  return grad;
}

template <typename Real>
double apply_step(BasicEmbeddingModel<Real>& model, TokenId target,
                  std::span<const TokenId> context, std::span<const TokenId> negatives,
                  double rate) {
  const std::size_t d = model.dim();
  const std::vector<double> h = context_mean(model, context);

  // Scores and error signals for every output row, all at the old parameters.
  const std::size_t outputs = negatives.size() + 1;
  std::vector<double> errors(outputs);
  double loss = 0.0;
  auto output_id = [&](std::size_t k) { return k == 0 ? target : negatives[k - 1]; };
  for (std::size_t k = 0; k < outputs; ++k) {
    auto row = std::as_const(model).output_row(output_id(k));
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += static_cast<double>(row[i]) * h[i];
    const double label = k == 0 ? 1.0 : 0.0;
    loss += k == 0 ? softplus(-s) : softplus(s);
    errors[k] = sigmoid(s) - label;
  }

  std::vector<double> dh(d, 0.0);
  for (std::size_t k = 0; k < outputs; ++k) {
    auto row = std::as_const(model).output_row(output_id(k));
    for (std::size_t i = 0; i < d; ++i) dh[i] += errors[k] * static_cast<double>(row[i]);
  }
  for (std::size_t k = 0; k < outputs; ++k) {
    auto row = model.output_row(output_id(k));
    const double step = -rate * errors[k];
    for (std::size_t i = 0; i < d; ++i) row[i] += static_cast<Real>(step * h[i]);
  }
  const double scale = -rate / static_cast<double>(context.size());
  for (TokenId c : context) {
    auto row = model.input_row(c);
    for (std::size_t i = 0; i < d; ++i) row[i] += static_cast<Real>(scale * dh[i]);
  }
  return loss;
}

template <typename Real>
double cbow_step(BasicEmbeddingModel<Real>& model, const TrainingStep& step,
                 const NegativeSampler& sampler, std::size_t negatives, Rng& rng) {
  if (step.context.empty()) throw Error(ErrorCode::EmptyContext, "CBOW step needs at least one context token");
  const std::uint32_t arch = model.vocab().entry(step.target).arch;
  // With a single token in the architecture there is nothing to contrast with.
  std::vector<TokenId> drawn;
  if (sampler.support(arch) > 1) {
    drawn.reserve(negatives);
    while (drawn.size() < negatives) {
      const TokenId id = sampler.sample(arch, rng);
      if (id != step.target) drawn.push_back(id);
    }
  } else if (sampler.support(arch) == 0) {
    throw Error(ErrorCode::UnknownArchitecture, "sampler has no table for '" + model.vocab().arch_of(step.target) + "'");
  }
  const double rate = step.weight * step.alpha;
  if (rate == 0.0) return step_loss(model, step.target, step.context, drawn);
  return apply_step(model, step.target, step.context, drawn, rate);
}

template <typename Real>
PassResult mono_pass(BasicEmbeddingModel<Real>& model, std::span<const TokenId> block,
                     const TrainConfig& cfg, const NegativeSampler& sampler, Rng& rng,
                     double alpha) {
  const Vocabulary& vocab = model.vocab();
  std::vector<TokenId> kept;
  kept.reserve(block.size());
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (TokenId id : block) {
    const auto& e = vocab.entry(id);
    const double p = keep_probability(e.count, vocab.arch_total(e.arch), cfg.subsample);
    if (p >= 1.0 || uniform(rng) < p) kept.push_back(id);
  }

  PassResult result;
  if (kept.size() < 2) return result;
  std::vector<TokenId> context;
  for (std::size_t p = 0; p < kept.size(); ++p) {
    window_context(kept, p, effective_window(cfg, rng), false, context);
    TrainingStep step{kept[p], context, cfg.gamma, alpha};
    result.loss += cbow_step(model, step, sampler, cfg.negatives, rng);
    ++result.steps;
  }
  return result;
}

template <typename Real>
PassResult multi_pass(BasicEmbeddingModel<Real>& model, std::span<const TokenId> first,
                      std::span<const TokenId> second, const TrainConfig& cfg,
                      const NegativeSampler& sampler, Rng& rng, double alpha) {
  PassResult result;
  std::vector<TokenId> context;
  auto direction = [&](std::span<const TokenId> targets, std::span<const TokenId> partner) {
    if (targets.empty() || partner.empty()) return;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const std::size_t j = align(i, targets.size(), partner.size());
      window_context(partner, j, effective_window(cfg, rng), cfg.include_aligned_center, context);
      if (context.empty()) continue;
      TrainingStep step{targets[i], context, cfg.beta, alpha};
      result.loss += cbow_step(model, step, sampler, cfg.negatives, rng);
      ++result.steps;
    }
  };
  direction(first, second);
  direction(second, first);
  return result;
}

// ---------------------------------------------------------------------------
// Training loop

template <typename Real>
TrainReport train(BasicEmbeddingModel<Real>& model, std::span<const BlockPair> pairs,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  if (model.dim() != cfg.dim) {
    throw Error(ErrorCode::ConfigMismatch, "model dim " + std::to_string(model.dim()) +
                                               " != configured dim " + std::to_string(cfg.dim));
  }
  if (!pairs.empty() && !(Vocabulary::build(pairs, cfg.min_count) == model.vocab())) {
    throw Error(ErrorCode::ConfigMismatch,
                "model vocabulary was not built from this corpus with min_count " +
                    std::to_string(cfg.min_count));
  }

  const Vocabulary& vocab = model.vocab();
  std::vector<std::vector<TokenId>> firsts, seconds;
  firsts.reserve(pairs.size());
  seconds.reserve(pairs.size());
  std::uint64_t tokens_per_epoch = 0;
  for (const auto& pair : pairs) {
    firsts.push_back(vocab.encode(pair.first));
    seconds.push_back(vocab.encode(pair.second));
    tokens_per_epoch += firsts.back().size() + seconds.back().size();
  }
  const NegativeSampler sampler(vocab);
  const double total = static_cast<double>(tokens_per_epoch) * static_cast<double>(cfg.epochs);
  const double floor_alpha = cfg.learning_rate * 1e-4;
  std::atomic<std::uint64_t> processed{0};

  auto current_alpha = [&]() {
    if (total <= 0.0) return cfg.learning_rate;
    const double progress = static_cast<double>(processed.load(std::memory_order_relaxed)) / total;
    return std::max(floor_alpha, cfg.learning_rate * (1.0 - progress));
  };

  TrainReport report;
  std::vector<std::size_t> order(pairs.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, std::max<std::size_t>(1, pairs.size())));

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    {
      std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(epoch), std::uint64_t{0x5eed}};
      Rng shuffle_rng(seq);
      std::shuffle(order.begin(), order.end(), shuffle_rng);
    }

    std::vector<PassResult> mono(workers), multi(workers);
    auto run_worker = [&](std::size_t w) {
      std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(w + 1)};
      Rng rng(seq);
      const std::size_t begin = w * order.size() / workers;
      const std::size_t end = (w + 1) * order.size() / workers;
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t idx = order[k];
        const double alpha = current_alpha();
        for (const auto* block : {&firsts[idx], &seconds[idx]}) {
          auto r = mono_pass(model, std::span<const TokenId>(*block), cfg, sampler, rng, alpha);
          mono[w].loss += r.loss;
          mono[w].steps += r.steps;
        }
        auto r = multi_pass(model, std::span<const TokenId>(firsts[idx]),
                            std::span<const TokenId>(seconds[idx]), cfg, sampler, rng, alpha);
        multi[w].loss += r.loss;
        multi[w].steps += r.steps;
        processed.fetch_add(firsts[idx].size() + seconds[idx].size(), std::memory_order_relaxed);
      }
    };

    if (workers == 1) {
      run_worker(0);
    } else {
      // Lock-free updates of the shared matrices, word2vec style.
      std::vector<std::jthread> threads;
      threads.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run_worker, w);
    }

    TrainReport::Epoch stats;
    for (std::size_t w = 0; w < workers; ++w) {
      stats.mono_loss += mono[w].loss;
      stats.mono_steps += mono[w].steps;
      stats.multi_loss += multi[w].loss;
      stats.multi_steps += multi[w].steps;
    }
    if (stats.mono_steps > 0) stats.mono_loss /= static_cast<double>(stats.mono_steps);
    if (stats.multi_steps > 0) stats.multi_loss /= static_cast<double>(stats.multi_steps);
    stats.final_alpha = current_alpha();
    report.epochs.push_back(stats);
    if (on_epoch) on_epoch(epoch, stats);
  }
  model.set_training_metadata(cfg.hash(),
                              model.epochs_completed() + static_cast<std::uint32_t>(cfg.epochs));
  return report;
}

#define XEMB_INSTANTIATE(Real)                                                                   \
  template class BasicEmbeddingModel<Real>;                                                      \
  template double step_loss(const BasicEmbeddingModel<Real>&, TokenId, std::span<const TokenId>, \
                            std::span<const TokenId>);                                           \
  template StepGradient step_gradient(const BasicEmbeddingModel<Real>&, TokenId,                 \
                                      std::span<const TokenId>, std::span<const TokenId>);       \
  template double apply_step(BasicEmbeddingModel<Real>&, TokenId, std::span<const TokenId>,      \
                             std::span<const TokenId>, double);                                  \
  template double cbow_step(BasicEmbeddingModel<Real>&, const TrainingStep&,                     \
                            const NegativeSampler&, std::size_t, Rng&);                          \
  template PassResult mono_pass(BasicEmbeddingModel<Real>&, std::span<const TokenId>,            \
                                const TrainConfig&, const NegativeSampler&, Rng&, double);       \
  template PassResult multi_pass(BasicEmbeddingModel<Real>&, std::span<const TokenId>,           \
                                 std::span<const TokenId>, const TrainConfig&,                   \
                                 const NegativeSampler&, Rng&, double);                          \
  template TrainReport train(BasicEmbeddingModel<Real>&, std::span<const BlockPair>,             \
                             const TrainConfig&, const EpochCallback&);

XEMB_INSTANTIATE(float)
XEMB_INSTANTIATE(double)

#undef XEMB_INSTANTIATE

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr char kMagic[4] = {'X', 'A', 'E', 'M'};

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::is_integral_v<T>);
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>(static_cast<std::make_unsigned_t<T>>(value) >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error(ErrorCode::CorruptFile, "unexpected end of model file");
  }
  std::make_unsigned_t<T> value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<std::make_unsigned_t<T>>(bytes[i]) << (8 * i);
  }
  return static_cast<T>(value);
}

void write_floats(std::ostream& out, const std::vector<float>& values) {
  for (float v : values) write_le(out, std::bit_cast<std::uint32_t>(v));
}

std::vector<float> read_floats(std::istream& in, std::size_t n) {
  std::vector<float> values(n);
  for (auto& v : values) v = std::bit_cast<float>(read_le<std::uint32_t>(in));
  return values;
}

}  // namespace

void save_model(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  write_le<std::uint32_t>(out, kModelFormatVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.dim()));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.size()));
  write_le<std::uint64_t>(out, model.config_hash());
  write_le<std::uint32_t>(out, model.epochs_completed());
  const Vocabulary& vocab = model.vocab();
  for (TokenId id = 0; id < vocab.size(); ++id) {
    const auto& e = vocab.entry(id);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.token.size()));
    out.write(e.token.data(), static_cast<std::streamsize>(e.token.size()));
    write_le<std::uint64_t>(out, e.count);
  }
  write_floats(out, model.input());
  write_floats(out, model.output());
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

EmbeddingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw Error(ErrorCode::CorruptFile, path.string() + " is not a model file");
  }
  const auto version = read_le<std::uint32_t>(in);
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::IncompatibleVersion, "model format version " + std::to_string(version) +
                                                    ", expected " + std::to_string(kModelFormatVersion));
  }
  const auto dim = read_le<std::uint32_t>(in);
  const auto rows = read_le<std::uint32_t>(in);
  const auto config_hash = read_le<std::uint64_t>(in);
  const auto epochs = read_le<std::uint32_t>(in);
  if (dim == 0 || rows == 0) throw Error(ErrorCode::CorruptFile, "empty model header");

  const auto file_size = std::filesystem::file_size(path);
  // Each vocabulary row takes at least 12 bytes and each matrix entry 4.
  if (std::uint64_t{rows} * 12 + std::uint64_t{rows} * dim * 8 > file_size) {
    throw Error(ErrorCode::CorruptFile, "header sizes exceed file length");
  }
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  entries.reserve(rows);
  for (std::uint32_t i = 0; i < rows; ++i) {
    const auto len = read_le<std::uint32_t>(in);
    if (len == 0 || len > file_size) throw Error(ErrorCode::CorruptFile, "bad token length");
    std::string token(len, '\0');
    if (!in.read(token.data(), len)) throw Error(ErrorCode::CorruptFile, "unexpected end of model file");
    entries.emplace_back(std::move(token), read_le<std::uint64_t>(in));
  }
  const std::size_t n = std::size_t{rows} * dim;
  auto input = read_floats(in, n);
  auto output = read_floats(in, n);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::CorruptFile, "trailing bytes after model data");
  }
  auto model = EmbeddingModel::from_matrices(Vocabulary::from_counts(std::move(entries)), dim,
                                             std::move(input), std::move(output));
  model.set_training_metadata(config_hash, epochs);
  return model;
}

void export_text(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << model.size() << ' ' << model.dim() << '\n';
  char buf[32];
  for (TokenId id = 0; id < model.size(); ++id) {
    out << model.vocab().token(id);
    for (float v : model.input_row(id)) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ';
      out.write(buf, end - buf);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace xemb
