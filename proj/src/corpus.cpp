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

#include "xemb/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "xemb/error.hpp"

namespace xemb {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

// Strips a leading "<arch>:" from an already-normalized instruction body.
std::string_view strip_prefix(std::string_view ins, std::string_view arch) {
  if (ins.size() > arch.size() && ins.substr(0, arch.size()) == arch && ins[arch.size()] == ':') {
    ins.remove_prefix(arch.size() + 1);
  }
  return ins;
}

struct RecordContext {
  const std::filesystem::path& path;
  std::size_t line;

  [[noreturn]] void fail(ErrorCode code, const std::string& detail) const {
    throw RecordError(code, path.string(), line, detail);
  }
};

Block parse_block(const json& side, const char* name, bool normalized,
                  const Normalizer& normalizer, const RecordContext& ctx) {
  if (!side.is_object()) ctx.fail(ErrorCode::MalformedRecord, std::string("'") + name + "' is not an object");
  auto arch_it = side.find("arch");
  auto ins_it = side.find("ins");
  if (arch_it == side.end() || !arch_it->is_string()) {
    ctx.fail(ErrorCode::MalformedRecord, std::string("'") + name + ".arch' missing or not a string");
  }
  if (ins_it == side.end() || !ins_it->is_array()) {
    ctx.fail(ErrorCode::MalformedRecord, std::string("'") + name + ".ins' missing or not an array");
  }
  const std::string arch_name = arch_it->get<std::string>();
  if (!Architecture::is_valid_name(arch_name)) {
    ctx.fail(ErrorCode::MalformedRecord, "invalid architecture tag '" + arch_name + "'");
  }
  const Architecture arch(arch_name);
  Block block{arch_name, {}};
  block.tokens.reserve(ins_it->size());
  for (const auto& ins : *ins_it) {
    if (!ins.is_string()) ctx.fail(ErrorCode::MalformedRecord, "instruction is not a string");
    const std::string& text = ins.get_ref<const std::string&>();
    if (normalized) {
      std::string_view body = strip_prefix(text, arch_name);
      if (body.empty()) ctx.fail(ErrorCode::MalformedRecord, "empty instruction");
      block.tokens.push_back(arch_name + ":" + std::string(body));
    } else {
      try {
        block.tokens.push_back(normalizer.token(text, arch));
      } catch (const Error& e) {
        ctx.fail(ErrorCode::MalformedRecord, e.what());
      }
    }
  }
  if (block.tokens.empty()) {
    ctx.fail(ErrorCode::EmptyBlock, std::string("block '") + name + "' has no instructions");
  }
  return block;
}

BlockPair parse_pair(const json& record, const Normalizer& normalizer, const RecordContext& ctx) {
  if (!record.is_object()) ctx.fail(ErrorCode::MalformedRecord, "record is not a JSON object");
  auto id_it = record.find("id");
  if (id_it == record.end() || !id_it->is_string()) {
    ctx.fail(ErrorCode::MalformedRecord, "'id' missing or not a string");
  }
  bool normalized = false;
  if (auto it = record.find("normalized"); it != record.end()) {
    if (!it->is_boolean()) ctx.fail(ErrorCode::MalformedRecord, "'normalized' is not a boolean");
    normalized = it->get<bool>();
  }
  if (!record.contains("a") || !record.contains("b")) {
    ctx.fail(ErrorCode::MalformedRecord, "record needs blocks 'a' and 'b'");
  }
  BlockPair pair;
  pair.id = id_it->get<std::string>();
  pair.first = parse_block(record["a"], "a", normalized, normalizer, ctx);
  pair.second = parse_block(record["b"], "b", normalized, normalizer, ctx);
  if (pair.first.arch == pair.second.arch) {
    ctx.fail(ErrorCode::ArchMismatch, "both blocks are '" + pair.first.arch + "'");
  }
  return pair;
}

json block_to_json(const Block& block) {
  json ins = json::array();
  for (const auto& token : block.tokens) ins.push_back(std::string(strip_prefix(token, block.arch)));
  return json{{"arch", block.arch}, {"ins", std::move(ins)}};
}

json pair_to_json(const BlockPair& pair) {
  json record;
  record["id"] = pair.id;
  record["a"] = block_to_json(pair.first);
  record["b"] = block_to_json(pair.second);
  record["normalized"] = true;
  return record;
}

template <typename Fn>
void for_each_record(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_input(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    RecordContext ctx{path, lineno};
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      ctx.fail(ErrorCode::MalformedRecord, e.what());
    }
    fn(record, ctx);
  }
}

}  // namespace

std::vector<BlockPair> load_pairs(const std::filesystem::path& path, const Normalizer& normalizer) {
  std::vector<BlockPair> pairs;
  for_each_record(path, [&](const json& record, const RecordContext& ctx) {
    pairs.push_back(parse_pair(record, normalizer, ctx));
  });
  return pairs;
}

void save_pairs(const std::filesystem::path& path, std::span<const BlockPair> pairs) {
  auto out = open_output(path);
  for (const auto& pair : pairs) out << pair_to_json(pair).dump() << '\n';
}

std::vector<LabeledBlockPair> load_labeled_block_pairs(const std::filesystem::path& path,
                                                       const Normalizer& normalizer) {
  std::vector<LabeledBlockPair> pairs;
  for_each_record(path, [&](const json& record, const RecordContext& ctx) {
    LabeledBlockPair labeled;
    labeled.pair = parse_pair(record, normalizer, ctx);
    auto it = record.find("label");
    if (it == record.end() || !it->is_number_integer()) {
      ctx.fail(ErrorCode::MalformedRecord, "'label' missing or not an integer");
    }
    labeled.label = it->get<int>();
    if (labeled.label != 1 && labeled.label != -1) {
      ctx.fail(ErrorCode::MalformedRecord, "label must be 1 or -1");
    }
    pairs.push_back(std::move(labeled));
  });
  return pairs;
}

void save_labeled_block_pairs(const std::filesystem::path& path,
                              std::span<const LabeledBlockPair> pairs) {
  auto out = open_output(path);
  for (const auto& labeled : pairs) {
    json record = pair_to_json(labeled.pair);
    record["label"] = labeled.label;
    out << record.dump() << '\n';
  }
}

std::vector<LabeledPair> load_labeled_instruction_pairs(const std::filesystem::path& path,
                                                        const Normalizer& normalizer) {
  auto in = open_input(path);
  std::vector<LabeledPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line) || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1) {
      fields.push_back(line.substr(start, tab - start));
    }
    fields.push_back(line.substr(start));
    if (fields.size() != 5) {
      throw RecordError(ErrorCode::MalformedRecord, path.string(), lineno,
                        "expected 5 tab-separated fields, got " + std::to_string(fields.size()));
    }
    LabeledPair pair;
    try {
      pair.left = normalizer.token(fields[1], Architecture(fields[0]));
      pair.right = normalizer.token(fields[3], Architecture(fields[2]));
    } catch (const Error& e) {
      throw RecordError(ErrorCode::MalformedRecord, path.string(), lineno, e.what());
    }
    if (fields[4] == "1" || fields[4] == "+1") {
      pair.label = 1;
    } else if (fields[4] == "-1") {
      pair.label = -1;
    } else {
      throw RecordError(ErrorCode::MalformedRecord, path.string(), lineno,
                        "label must be 1 or -1, got '" + fields[4] + "'");
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::size_t preprocess_corpus(const std::filesystem::path& in_path,
                              const std::filesystem::path& out_path, const Normalizer& normalizer) {
  std::vector<json> records;
  for_each_record(in_path, [&](const json& record, const RecordContext& ctx) {
    const BlockPair pair = parse_pair(record, normalizer, ctx);
    json rewritten = record;
    rewritten["a"] = block_to_json(pair.first);
    rewritten["b"] = block_to_json(pair.second);
    rewritten["normalized"] = true;
    records.push_back(std::move(rewritten));
  });
  // Read fully before writing so in-place rewriting is safe.
  auto out = open_output(out_path);
  for (const auto& record : records) out << record.dump() << '\n';
  return records.size();
}

// ---------------------------------------------------------------------------
// Vocabulary

std::string_view token_arch(std::string_view token) {
  std::string_view arch, body;
  return split_token(token, arch, body) ? arch : std::string_view{};
}

Vocabulary Vocabulary::build(std::span<const BlockPair> pairs, std::uint64_t min_count) {
  std::map<std::string, std::uint64_t, std::less<>> counts;
  for (const auto& pair : pairs) {
    for (const Block* block : {&pair.first, &pair.second}) {
      for (const auto& token : block->tokens) ++counts[token];
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> rows;
  for (auto& [token, count] : counts) {
    if (count >= min_count) rows.emplace_back(token, count);
  }
  if (rows.empty()) {
    throw Error(ErrorCode::EmptyVocabulary,
                "no token reaches min_count " + std::to_string(min_count));
  }
  // counts is ordered lexicographically, so a stable sort keeps ties in order.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return from_counts(std::move(rows));
}

Vocabulary Vocabulary::from_counts(std::vector<std::pair<std::string, std::uint64_t>> rows) {
  Vocabulary vocab;
  vocab.entries_.reserve(rows.size());
  for (auto& [token, count] : rows) {
    const std::string arch(token_arch(token));
    auto it = std::find(vocab.arch_names_.begin(), vocab.arch_names_.end(), arch);
    std::uint32_t arch_id = static_cast<std::uint32_t>(it - vocab.arch_names_.begin());
    if (it == vocab.arch_names_.end()) {
      vocab.arch_names_.push_back(arch);
      vocab.arch_totals_.push_back(0);
    }
    vocab.arch_totals_[arch_id] += count;
    vocab.entries_.push_back(Entry{std::move(token), arch_id, count});
  }
  vocab.index_entries();
  return vocab;
}

void Vocabulary::index_entries() {
  index_.clear();
  index_.reserve(entries_.size());
  for (TokenId id = 0; id < entries_.size(); ++id) index_.emplace(entries_[id].token, id);
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Vocabulary::arch_index(std::string_view arch) const {
  auto it = std::find(arch_names_.begin(), arch_names_.end(), arch);
  if (it == arch_names_.end()) return std::nullopt;
  return static_cast<std::uint32_t>(it - arch_names_.begin());
}

std::vector<TokenId> Vocabulary::encode(const Block& block) const {
  std::vector<TokenId> ids;
  ids.reserve(block.tokens.size());
  for (const auto& token : block.tokens) {
    if (auto id = find(token)) ids.push_back(*id);
  }
  return ids;
}

std::vector<std::pair<std::string, std::uint64_t>> Vocabulary::tokens_and_counts() const {
  std::vector<std::pair<std::string, std::uint64_t>> rows;
  rows.reserve(entries_.size());
  for (const auto& e : entries_) rows.emplace_back(e.token, e.count);
  return rows;
}

// ---------------------------------------------------------------------------
// Sampling

double keep_probability(std::uint64_t count, std::uint64_t arch_total, double rate) {
  const double f = static_cast<double>(count) / static_cast<double>(arch_total);
  const double keep = (std::sqrt(f / rate) + 1.0) * rate / f;
  return std::min(1.0, keep);
}

NegativeSampler::NegativeSampler(const Vocabulary& vocab, double power)
    : arch_names_(vocab.arch_names()), tables_(vocab.arch_names().size()) {
  for (TokenId id = 0; id < vocab.size(); ++id) {
    const auto& e = vocab.entry(id);
    auto& table = tables_[e.arch];
    const double weight = std::pow(static_cast<double>(e.count), power);
    table.ids.push_back(id);
    table.cumulative.push_back((table.cumulative.empty() ? 0.0 : table.cumulative.back()) + weight);
  }
}

TokenId NegativeSampler::sample(std::string_view arch, Rng& rng) const {
  auto it = std::find(arch_names_.begin(), arch_names_.end(), arch);
  if (it == arch_names_.end()) {
    throw Error(ErrorCode::UnknownArchitecture, "no vocabulary entries for '" + std::string(arch) + "'");
  }
  return sample(static_cast<std::uint32_t>(it - arch_names_.begin()), rng);
}

TokenId NegativeSampler::sample(std::uint32_t arch_index, Rng& rng) const {
  if (arch_index >= tables_.size() || tables_[arch_index].ids.empty()) {
    throw Error(ErrorCode::UnknownArchitecture, "architecture index " + std::to_string(arch_index));
  }
  const auto& table = tables_[arch_index];
  const double u = std::uniform_real_distribution<double>(0.0, table.cumulative.back())(rng);
  auto it = std::upper_bound(table.cumulative.begin(), table.cumulative.end(), u);
  if (it == table.cumulative.end()) --it;
  return table.ids[static_cast<std::size_t>(it - table.cumulative.begin())];
}

std::size_t NegativeSampler::support(std::uint32_t arch_index) const {
  return arch_index < tables_.size() ? tables_[arch_index].ids.size() : 0;
}

}  // namespace xemb
