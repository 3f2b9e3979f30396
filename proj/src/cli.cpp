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

#include "xemb/cli.hpp"

#include <fstream>
#include <iomanip>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "xemb/corpus.hpp"
#include "xemb/error.hpp"
#include "xemb/eval.hpp"
#include "xemb/model.hpp"
#include "xemb/normalizer.hpp"
#include "xemb/synthetic.hpp"

namespace xemb::cli {

namespace {

struct Options {
  std::string corpus;
  std::string model;
  std::string out;
  std::string pairs;
  std::string pairs_out;
  std::string report;
  std::string roc_out;
  std::string lexicons;
  std::string token;
  std::string token_a;
  std::string token_b;
  std::string arch;
  std::size_t k = 10;
  bool baseline = false;
  TrainConfig train;
  SyntheticConfig synthetic;
};

Normalizer make_normalizer(const Options& opts) {
  if (opts.lexicons.empty()) return Normalizer();
  return Normalizer(LexiconRegistry::load_directory(opts.lexicons));
}

// Accepts a canonical token or "arch:raw instruction" and returns the
// canonical token.
std::string canonical_token(const std::string& text, const Normalizer& normalizer) {
  std::string_view arch, body;
  if (!split_token(text, arch, body)) {
    throw Error(ErrorCode::UnknownToken, "token '" + text + "' has no '<arch>:' prefix");
  }
  return normalizer.token(body, Architecture(std::string(arch)));
}

void write_report(const std::string& path, const nlohmann::json& report) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << report.dump(2) << '\n';
}

void print_eval(const EvalReport& report, const Options& opts, std::ostream& out,
                std::ostream& err) {
  write_roc(out, report.roc);
  if (!report.excluded.empty()) {
    err << "excluded " << report.excluded.size() << " of " << report.pairs << " pairs\n";
  }
  if (!opts.roc_out.empty()) {
    std::ofstream roc(opts.roc_out, std::ios::binary);
    if (!roc) throw Error(ErrorCode::IoError, "cannot write " + opts.roc_out);
    write_roc(roc, report.roc);
  }
  write_report(opts.report, report.to_json());
}

nlohmann::json train_report_json(const TrainReport& report, const TrainConfig& cfg,
                                  std::size_t vocab_size) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : report.epochs) {
    epochs.push_back({{"mono_loss", e.mono_loss},
                      {"multi_loss", e.multi_loss},
                      {"mono_steps", e.mono_steps},
                      {"multi_steps", e.multi_steps},
                      {"final_alpha", e.final_alpha}});
  }
  return {{"vocabulary", vocab_size}, {"config_hash", cfg.hash()}, {"epochs", std::move(epochs)}};
}

void cmd_preprocess(const Options& opts, std::ostream& out) {
  const std::string target = opts.out.empty() ? opts.corpus : opts.out;
  const std::size_t n = preprocess_corpus(opts.corpus, target, make_normalizer(opts));
  out << "normalized " << n << " records -> " << target << '\n';
}

void cmd_train(const Options& opts, std::ostream& out) {
  const TrainConfig& cfg = opts.train;
  cfg.validate();
  const auto pairs = load_pairs(opts.corpus, make_normalizer(opts));
  auto model = EmbeddingModel::init(Vocabulary::build(pairs, cfg.min_count), cfg.dim, cfg.seed);
  out << "pairs " << pairs.size() << ", vocabulary " << model.size() << ", dim " << cfg.dim << '\n';
  out << "epoch\tmono_loss\tmulti_loss\tmono_steps\tmulti_steps\talpha\n";
  const auto report = train(model, pairs, cfg, [&](std::size_t epoch, const TrainReport::Epoch& e) {
    out << epoch + 1 << '\t' << std::fixed << std::setprecision(6) << e.mono_loss << '\t'
        << e.multi_loss << '\t' << e.mono_steps << '\t' << e.multi_steps << '\t' << e.final_alpha
        << '\n'
        << std::defaultfloat;
  });
  save_model(model, opts.model);
  write_report(opts.report, train_report_json(report, cfg, model.size()));
  out << "saved " << opts.model << '\n';
}

void cmd_nn(const Options& opts, std::ostream& out) {
  const auto model = load_model(opts.model);
  const std::string query = canonical_token(opts.token, make_normalizer(opts));
  std::optional<std::string> filter;
  if (!opts.arch.empty()) filter = opts.arch;
  for (const auto& n : nearest(model, query, opts.k, filter)) {
    out << n.token << '\t' << std::fixed << std::setprecision(6) << n.score << std::defaultfloat
        << '\n';
  }
}

void cmd_sim(const Options& opts, std::ostream& out) {
  const auto model = load_model(opts.model);
  const Normalizer normalizer = make_normalizer(opts);
  const double score = token_similarity(model, canonical_token(opts.token_a, normalizer),
                                        canonical_token(opts.token_b, normalizer));
  out << std::setprecision(17) << score << std::defaultfloat << '\n';
}

void cmd_eval_instr(const Options& opts, std::ostream& out, std::ostream& err) {
  const auto model = load_model(opts.model);
  const auto pairs = load_labeled_instruction_pairs(opts.pairs, make_normalizer(opts));
  print_eval(eval_instruction_pairs(model, pairs), opts, out, err);
}

void cmd_eval_blocks(const Options& opts, std::ostream& out, std::ostream& err) {
  const Normalizer normalizer = make_normalizer(opts);
  const auto pairs = load_labeled_block_pairs(opts.pairs, normalizer);
  if (opts.baseline) {
    print_eval(eval_block_pairs_baseline(pairs, normalizer.lexicons()), opts, out, err);
  } else {
    if (opts.model.empty()) throw CLI::RequiredError("--model");
    print_eval(eval_block_pairs(load_model(opts.model), pairs), opts, out, err);
  }
}

void cmd_export(const Options& opts, std::ostream& out) {
  const auto model = load_model(opts.model);
  export_text(model, opts.out);
  out << "wrote " << model.size() << " vectors -> " << opts.out << '\n';
}

void cmd_gen_synthetic(const Options& opts, std::ostream& out) {
  const auto corpus = generate_synthetic(opts.synthetic);
  save_pairs(opts.out, corpus.pairs);
  if (!opts.pairs_out.empty()) save_labeled_instruction_pairs(opts.pairs_out, corpus.planted);
  out << "wrote " << corpus.pairs.size() << " pairs -> " << opts.out << '\n';
}

void add_train_flags(CLI::App& cmd, TrainConfig& cfg) {
  cmd.add_option("--dim", cfg.dim, "Embedding dimension")->capture_default_str();
  cmd.add_option("--window", cfg.window, "Context window on each side")->capture_default_str();
  cmd.add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
  cmd.add_option("--lr", cfg.learning_rate, "Initial learning rate")->capture_default_str();
  cmd.add_option("--negatives", cfg.negatives, "Negative samples per step")->capture_default_str();
  cmd.add_option("--subsample", cfg.subsample, "Subsampling rate")->capture_default_str();
  cmd.add_option("--gamma", cfg.gamma, "Weight of the mono-architecture component")->capture_default_str();
  cmd.add_option("--beta", cfg.beta, "Weight of the cross-architecture component")->capture_default_str();
  cmd.add_option("--min-count", cfg.min_count, "Minimum token count")->capture_default_str();
  cmd.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd.add_option("--workers", cfg.workers, "Training threads")->capture_default_str();
  cmd.add_flag("--dynamic-window", cfg.dynamic_window, "Shrink windows randomly per position");
  cmd.add_flag("--include-aligned-center", cfg.include_aligned_center,
               "Keep the aligned instruction in cross-architecture contexts");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opts;
  CLI::App app{"Cross-architecture instruction embeddings", "xemb"};
  app.require_subcommand(1, 1);
  app.add_option("--lexicons", opts.lexicons, "Directory of register/call/branch lexicons");

  auto* preprocess = app.add_subcommand("preprocess", "Normalize a raw corpus file");
  preprocess->add_option("--corpus", opts.corpus, "Corpus file")->required();
  preprocess->add_option("--out", opts.out, "Output file (default: rewrite in place)");

  auto* train_cmd = app.add_subcommand("train", "Build the vocabulary, train and save a model");
  train_cmd->add_option("--corpus", opts.corpus, "Corpus file")->required();
  train_cmd->add_option("--model", opts.model, "Output model file")->required();
  train_cmd->add_option("--report", opts.report, "Write per-epoch losses as JSON");
  add_train_flags(*train_cmd, opts.train);

  auto* nn = app.add_subcommand("nn", "Nearest neighbours of a token");
  nn->add_option("--model", opts.model, "Model file")->required();
  nn->add_option("--token", opts.token, "Query token, e.g. 'arm:add r1,r0,r7'")->required();
  nn->add_option("--k", opts.k, "Number of neighbours")->capture_default_str()->check(CLI::PositiveNumber);
  nn->add_option("--arch", opts.arch, "Restrict neighbours to one architecture");

  auto* sim = app.add_subcommand("sim", "Cosine similarity of two tokens");
  sim->add_option("--model", opts.model, "Model file")->required();
  sim->add_option("--a", opts.token_a, "First token")->required();
  sim->add_option("--b", opts.token_b, "Second token")->required();

  auto* eval_instr = app.add_subcommand("eval-instr", "ROC/AUC over labeled instruction pairs");
  eval_instr->add_option("--model", opts.model, "Model file")->required();
  eval_instr->add_option("--pairs", opts.pairs, "Labeled instruction-pair file")->required();
  eval_instr->add_option("--roc-out", opts.roc_out, "Also write the ROC lines to a file");
  eval_instr->add_option("--report", opts.report, "Write the evaluation report as JSON");

  auto* eval_blocks = app.add_subcommand("eval-blocks", "ROC/AUC over labeled block pairs");
  eval_blocks->add_option("--model", opts.model, "Model file (not needed with --baseline)");
  eval_blocks->add_option("--pairs", opts.pairs, "Labeled block-pair file")->required();
  eval_blocks->add_flag("--baseline", opts.baseline, "Use the feature-count comparator");
  eval_blocks->add_option("--roc-out", opts.roc_out, "Also write the ROC lines to a file");
  eval_blocks->add_option("--report", opts.report, "Write the evaluation report as JSON");

  auto* export_cmd = app.add_subcommand("export", "Write input embeddings in text vector format");
  export_cmd->add_option("--model", opts.model, "Model file")->required();
  export_cmd->add_option("--out", opts.out, "Output text file")->required();

  auto* gen = app.add_subcommand("gen-synthetic", "Generate the synthetic bijection corpus");
  SyntheticConfig& syn = opts.synthetic;
  gen->add_option("--out", opts.out, "Output corpus file")->required();
  gen->add_option("--pairs-out", opts.pairs_out, "Write planted labeled instruction pairs");
  gen->add_option("--vocab-size", syn.vocab_size, "Opcodes per architecture")->capture_default_str();
  gen->add_option("--blocks", syn.blocks, "Number of block pairs")->capture_default_str();
  gen->add_option("--min-len", syn.min_len, "Minimum block length")->capture_default_str();
  gen->add_option("--max-len", syn.max_len, "Maximum block length")->capture_default_str();
  gen->add_option("--noise", syn.noise, "Probability of swapping adjacent positions")->capture_default_str();
  gen->add_option("--planted", syn.planted, "Planted similar pairs (and as many dissimilar)")->capture_default_str();
  gen->add_option("--seed", syn.seed, "Random seed")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (preprocess->parsed()) cmd_preprocess(opts, out);
    else if (train_cmd->parsed()) cmd_train(opts, out);
    else if (nn->parsed()) cmd_nn(opts, out);
    else if (sim->parsed()) cmd_sim(opts, out);
    else if (eval_instr->parsed()) cmd_eval_instr(opts, out, err);
    else if (eval_blocks->parsed()) cmd_eval_blocks(opts, out, err);
    else if (export_cmd->parsed()) cmd_export(opts, out);
    else if (gen->parsed()) cmd_gen_synthetic(opts, out);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidConfig ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace xemb::cli
