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

#include "xemb/eval.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace xemb {

namespace {

TokenId require_token(const Vocabulary& vocab, std::string_view token) {
  auto id = vocab.find(token);
  if (!id) throw Error(ErrorCode::UnknownToken, "'" + std::string(token) + "' is not in the vocabulary");
  return *id;
}

double row_norm(std::span<const float> row) {
  double s = 0.0;
  for (float v : row) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

EvalReport finish_report(EvalReport report, const std::vector<double>& pos,
                         const std::vector<double>& neg) {
  report.positives = pos.size();
  report.negatives = neg.size();
  if (pos.empty() || neg.empty()) {
    throw Error(ErrorCode::EmptySide,
                std::to_string(pos.size()) + " positive and " + std::to_string(neg.size()) +
                    " negative pairs left after excluding " +
                    std::to_string(report.excluded.size()));
  }
  report.roc = roc_auc(pos, neg);
  return report;
}

}  // namespace

std::vector<Neighbor> nearest(const EmbeddingModel& model, std::string_view query, std::size_t k,
                              std::optional<std::string> arch_filter) {
  const Vocabulary& vocab = model.vocab();
  const TokenId qid = require_token(vocab, query);
  std::optional<std::uint32_t> arch;
  if (arch_filter) {
    arch = vocab.arch_index(*arch_filter);
    if (!arch) return {};
  }
  const auto q = model.input_row(qid);
  const double qn = row_norm(q);
  if (qn == 0.0) throw Error(ErrorCode::ZeroVector, "query embedding is zero");

  std::vector<Neighbor> scored;
  scored.reserve(vocab.size());
  for (TokenId id = 0; id < vocab.size(); ++id) {
    if (id == qid) continue;
    if (arch && vocab.entry(id).arch != *arch) continue;
    const auto row = model.input_row(id);
    const double rn = row_norm(row);
    if (rn == 0.0) continue;
    double dot = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) dot += static_cast<double>(q[i]) * row[i];
    scored.push_back(Neighbor{id, {}, std::clamp(dot / (qn * rn), -1.0, 1.0)});
  }
  const std::size_t take = std::min(k, scored.size());
  auto better = [](const Neighbor& a, const Neighbor& b) {
    return a.score != b.score ? a.score > b.score : a.id < b.id;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), better);
  scored.resize(take);
  for (auto& n : scored) n.token = vocab.token(n.id);
  return scored;
}

double token_similarity(const EmbeddingModel& model, std::string_view a, std::string_view b) {
  const TokenId ia = require_token(model.vocab(), a);
  const TokenId ib = require_token(model.vocab(), b);
  return cosine(model.input_row(ia), model.input_row(ib));
}

double retrieval_accuracy(const EmbeddingModel& model,
                          std::span<const std::pair<std::string, std::string>> counterparts,
                          std::size_t k) {
  if (counterparts.empty()) return 0.0;
  const Vocabulary& vocab = model.vocab();
  auto hit = [&](const std::string& query, const std::string& expected) {
    if (!vocab.find(query) || !vocab.find(expected)) return false;
    const auto found = nearest(model, query, k, std::string(token_arch(expected)));
    return std::any_of(found.begin(), found.end(),
                       [&](const Neighbor& n) { return n.token == expected; });
  };
  std::size_t hits = 0;
  for (const auto& [a, b] : counterparts) hits += static_cast<std::size_t>(hit(a, b)) + hit(b, a);
  return static_cast<double>(hits) / static_cast<double>(2 * counterparts.size());
}

// ---------------------------------------------------------------------------
// ROC

RocCurve roc_auc(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw Error(ErrorCode::EmptySide, "ROC needs positive and negative scores");

  struct Scored {
    double score;
    bool positive;
  };
  std::vector<Scored> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.push_back({s, true});
  for (double s : neg) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score < b.score; });

  // Rank-sum with average ranks over ties.
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (all[t].positive) pos_rank_sum += avg_rank;
    }
    i = j;
  }
  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());
  RocCurve roc;
  roc.auc = (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);

  // Threshold sweep from the highest score down.
  roc.points.emplace_back(0.0, 0.0);
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = all.size(); i > 0;) {
    std::size_t j = i;
    while (j > 0 && all[j - 1].score == all[i - 1].score) {
      (all[j - 1].positive ? tp : fp) += 1;
      --j;
    }
    roc.points.emplace_back(static_cast<double>(fp) / nn, static_cast<double>(tp) / np);
    i = j;
  }
  return roc;
}

double trapezoid_area(std::span<const std::pair<double, double>> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].first - points[i - 1].first) * (points[i].second + points[i - 1].second) / 2.0;
  }
  return area;
}

void write_roc(std::ostream& out, const RocCurve& roc) {
  char buf[32];
  auto put = [&](double v) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, end - buf);
  };
  for (const auto& [fpr, tpr] : roc.points) {
    put(fpr);
    out << '\t';
    put(tpr);
    out << '\n';
  }
  out << "AUC\t";
  put(roc.auc);
  out << '\n';
}

nlohmann::json EvalReport::to_json() const {
  return nlohmann::json{{"pairs", pairs},
                        {"positives", positives},
                        {"negatives", negatives},
                        {"excluded", excluded.size()},
                        {"excluded_pairs", excluded},
                        {"auc", roc.auc}};
}

// ---------------------------------------------------------------------------
// Instruction and block evaluation

EvalReport eval_instruction_pairs(const EmbeddingModel& model, std::span<const LabeledPair> pairs) {
  EvalReport report;
  report.pairs = pairs.size();
  std::vector<double> pos, neg;
  const Vocabulary& vocab = model.vocab();
  for (const auto& p : pairs) {
    auto a = vocab.find(p.left);
    auto b = vocab.find(p.right);
    if (!a || !b) {
      report.excluded.push_back(p.left + "\t" + p.right + (a ? "" : "\tunknown-left") +
                                (b ? "" : "\tunknown-right"));
      continue;
    }
    double score = 0.0;
    try {
      score = cosine(model.input_row(*a), model.input_row(*b));
    } catch (const Error& e) {
      report.excluded.push_back(p.left + "\t" + p.right + "\t" + e.what());
      continue;
    }
    (p.label == 1 ? pos : neg).push_back(score);
  }
  return finish_report(std::move(report), pos, neg);
}

std::vector<double> embed_block(const EmbeddingModel& model, const Block& block) {
  std::vector<double> sum(model.dim(), 0.0);
  std::size_t known = 0;
  for (const auto& token : block.tokens) {
    auto id = model.vocab().find(token);
    if (!id) continue;
    ++known;
    const auto row = model.input_row(*id);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += row[i];
  }
  if (known == 0) throw Error(ErrorCode::AllTokensUnknown, "no token of the block is in the vocabulary");
  return sum;
}

EvalReport eval_block_pairs(const EmbeddingModel& model, std::span<const LabeledBlockPair> pairs) {
  EvalReport report;
  report.pairs = pairs.size();
  std::vector<double> pos, neg;
  for (const auto& lp : pairs) {
    double score = 0.0;
    try {
      score = cosine(embed_block(model, lp.pair.first), embed_block(model, lp.pair.second));
    } catch (const Error& e) {
      report.excluded.push_back(lp.pair.id + "\t" + e.what());
      continue;
    }
    (lp.label == 1 ? pos : neg).push_back(score);
  }
  return finish_report(std::move(report), pos, neg);
}

// ---------------------------------------------------------------------------
// Feature-count baseline

BlockFeatureVector baseline_features(const Block& block, const LexiconRegistry& lexicons) {
  if (block.tokens.empty()) throw Error(ErrorCode::EmptyBlock, "baseline features of an empty block");
  BlockFeatureVector f;
  const ArchLexicon& lexicon = lexicons.get(Architecture(block.arch));
  const Architecture arch(block.arch);
  for (const auto& token : block.tokens) {
    std::string_view arch_name, body;
    if (!split_token(token, arch_name, body)) body = token;
    const ParsedInstruction ins = parse_instruction(body, arch);
    f.counts[0] += 1;
    for (const auto& op : ins.operands) {
      if (op == "0" || op == "-0") f.counts[1] += 1;
      if (op == kStringSentinel) f.counts[2] += 1;
    }
    if (lexicon.is_call(ins.opcode)) f.counts[3] += 1;
    if (lexicon.is_branch(ins.opcode)) f.counts[4] += 1;
  }
  return f;
}

double baseline_score(const BlockFeatureVector& a, const BlockFeatureVector& b) {
  std::array<double, 5> x{}, y{};
  bool x_zero = true, y_zero = true;
  for (std::size_t i = 0; i < 5; ++i) {
    x[i] = static_cast<double>(a.counts[i]);
    y[i] = static_cast<double>(b.counts[i]);
    x_zero = x_zero && x[i] == 0.0;
    y_zero = y_zero && y[i] == 0.0;
  }
  if (x_zero || y_zero) return 0.0;
  return cosine(std::span<const double>(x), std::span<const double>(y));
}

EvalReport eval_block_pairs_baseline(std::span<const LabeledBlockPair> pairs,
                                     const LexiconRegistry& lexicons) {
  EvalReport report;
  report.pairs = pairs.size();
  std::vector<double> pos, neg;
  for (const auto& lp : pairs) {
    const double score = baseline_score(baseline_features(lp.pair.first, lexicons),
                                        baseline_features(lp.pair.second, lexicons));
    (lp.label == 1 ? pos : neg).push_back(score);
  }
  return finish_report(std::move(report), pos, neg);
}

}  // namespace xemb
