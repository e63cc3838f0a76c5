// Copyright 2026 The ohwr Authors.
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

#include "cli.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <limits>

#include "commands.hpp"
#include "ohwr/error.hpp"

namespace ohwr::cli {
namespace {

using Command = std::function<void(const ExperimentConfig&, std::ostream&)>;

void add_common_options(CLI::App& app, ExperimentConfig& c) {
  app.add_option("--dataset", c.dataset, "JSONL dataset")->check(CLI::ExistingFile);
  app.add_option("--protocol", c.protocol, "Split protocol")
      ->check(CLI::IsMember({"wd", "wi"}))
      ->capture_default_str();
  app.add_option("--folds", c.folds, "Number of folds K")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  app.add_option("--fold", c.fold, "Only this fold (0-based)");
  app.add_option("--seed", c.seed, "Seed for splits and augmentation")->capture_default_str();
  app.add_option("--tokenizer", c.tokenizer, "Tokenizer kind")
      ->check(CLI::IsMember({"char", "bigram", "bpe", "unigram"}))
      ->capture_default_str();
  app.add_option("--vocab-size", c.vocab_sizes, "Vocabulary size(s); repeatable")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--concat", c.concat, "Extra samples concatenated per sample")
      ->capture_default_str();
  app.add_option("--separator", c.separator, "String inserted between joined labels");
  app.add_option("--out", c.out, "Output directory")->capture_default_str();
  app.add_option("--epoch", c.epoch, "Augmentation epoch")->capture_default_str();
  app.add_option("--frame-subsample", c.frame_subsample, "Recognizer temporal downsampling")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--model", c.model, "Tokenizer model file")->check(CLI::ExistingFile);
  app.add_option("--input", c.input, "Input text or token file")->check(CLI::ExistingFile);
  app.add_option("--output", c.output, "Output file (stdout when omitted)");
  app.add_option("--logits", c.logits, "Logit archive")->check(CLI::ExistingFile);
  app.add_option("--index", c.index, "Logit archive index (default: <logits>.index.jsonl)");
  app.add_option("--refs", c.refs, "References, one '<id>\\t<text>' per line")
      ->check(CLI::ExistingFile);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sub-word tokenization, augmentation and evaluation for IMU handwriting data",
               "ohwr"};
  app.set_version_flag("--version", std::string(OHWR_VERSION));
  app.set_config("--config", "", "INI or TOML config file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  ExperimentConfig config;
  add_common_options(app, config);

  Command selected;
  const std::vector<std::pair<const char*, std::pair<const char*, Command>>> commands{
      {"split", {"Write writer/label-grouped folds", cmd_split}},
      {"train-tokenizer", {"Train one tokenizer per fold and vocabulary size", cmd_train_tokenizer}},
      {"encode", {"Encode text lines to token ids", cmd_encode}},
      {"decode", {"Decode token-id lines to text", cmd_decode}},
      {"augment", {"Dump one concatenation-augmented epoch", cmd_augment}},
      {"score", {"Greedy-decode logits and report CER/WER", cmd_score}},
      {"analyze", {"Character distributions, token usage, feasibility", cmd_analyze}},
  };
  for (const auto& [name, entry] : commands) {
    const Command fn = entry.second;
    app.add_subcommand(name, entry.first)
        ->footer("Shared options (--dataset, --protocol, --folds, ...) are listed by 'ohwr --help'.")
        ->callback([&selected, fn] { selected = fn; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUserError;
  }

  try {
    selected(config, out);
    return kOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace ohwr::cli
