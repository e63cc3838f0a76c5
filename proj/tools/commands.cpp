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

#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "manifest.hpp"
#include "ohwr/augment.hpp"
#include "ohwr/corpus.hpp"
#include "ohwr/ctc.hpp"
#include "ohwr/error.hpp"
#include "ohwr/eval.hpp"
#include "ohwr/io.hpp"
#include "ohwr/tokenizer.hpp"
#include "ohwr/utf8.hpp"

namespace ohwr::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos && !text.empty() &&
      text.front() != ' ' && text.back() != ' ') {
    return std::string(text);
  }
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> char_list(const std::u32string& chars) {
  std::vector<std::string> out;
  for (char32_t c : chars) out.push_back(utf8::encode(c));
  return out;
}

void require_path(const fs::path& path, const char* flag) {
  if (path.empty()) throw InvalidArgument(std::string("missing required option ") + flag);
}

struct Splits {
  Dataset dataset;
  std::vector<FoldSplit> folds;
  std::vector<std::size_t> selected;
};

Splits load_splits(const ExperimentConfig& config) {
  require_path(config.dataset, "--dataset");
  Splits s{load_dataset(config.dataset), {}, {}};
  s.folds = split_folds(s.dataset, parse_protocol(config.protocol), config.folds, config.seed);
  if (config.fold) {
    if (*config.fold >= s.folds.size()) {
      throw InvalidArgument("--fold " + std::to_string(*config.fold) + " out of range for " +
                            std::to_string(s.folds.size()) + " folds");
    }
    s.selected.push_back(*config.fold);
  } else {
    for (std::size_t f = 0; f < s.folds.size(); ++f) s.selected.push_back(f);
  }
  return s;
}

bool is_char_tokenizer(const ExperimentConfig& config) { return config.tokenizer == "char"; }

// (V, model name) pairs for the configured tokenizer. The character model
// has no vocabulary size of its own.
std::vector<std::pair<std::size_t, std::string>> model_grid(const ExperimentConfig& config,
                                                             std::size_t fold) {
  std::vector<std::pair<std::size_t, std::string>> out;
  const std::string prefix = "fold" + std::to_string(fold) + "_" + config.tokenizer;
  if (is_char_tokenizer(config)) {
    out.emplace_back(0, prefix);
    return out;
  }
  if (config.vocab_sizes.empty()) throw InvalidArgument("no --vocab-size given");
  for (std::size_t v : config.vocab_sizes) out.emplace_back(v, prefix + "_V" + std::to_string(v));
  return out;
}

TokenizerModel train_for(const ExperimentConfig& config, std::span<const std::string> labels,
                         std::size_t vocab_size) {
  if (is_char_tokenizer(config)) return train_char(labels);
  return train_tokenizer(parse_tokenizer_kind(config.tokenizer), labels, vocab_size);
}

// Splits text into lines on '\n'. A final newline does not open a new line;
// `trailing` records whether it was there.
std::vector<std::string_view> split_lines(std::string_view text, bool& trailing) {
  std::vector<std::string_view> lines;
  trailing = !text.empty() && text.back() == '\n';
  if (trailing) text.remove_suffix(1);
  if (text.empty() && !trailing) return lines;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines, bool trailing) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.push_back('\n');
    out += lines[i];
  }
  if (trailing) out.push_back('\n');
  return out;
}

TokenSequence parse_token_line(std::string_view line, std::size_t line_no) {
  TokenSequence ids;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    TokenId id = 0;
    const auto res = std::from_chars(line.data() + i, line.data() + line.size(), id);
    if (res.ec != std::errc() ||
        (res.ptr != line.data() + line.size() && *res.ptr != ' ' && *res.ptr != '\t' && *res.ptr != '\r')) {
      throw ParseError(line_no, "expected whitespace-separated token ids");
    }
    ids.push_back(id);
    i = static_cast<std::size_t>(res.ptr - line.data());
  }
  return ids;
}

void write_output(const ExperimentConfig& config, const std::string& text, std::ostream& out) {
  if (config.output.empty()) {
    out << text;
  } else {
    write_file(config.output, text);
  }
}

std::vector<std::pair<std::string, std::string>> load_refs(const fs::path& path) {
  std::vector<std::pair<std::string, std::string>> refs;
  const std::string text = read_file(path);
  bool trailing = false;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text, trailing)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw ParseError(line_no, "expected '<id>\\t<reference>'");
    }
    refs.emplace_back(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  }
  return refs;
}

std::string char_distribution_csv(const CharDistribution& train, const CharDistribution& val) {
  std::set<char32_t> chars;
  for (const auto& [c, stat] : train) chars.insert(c);
  for (const auto& [c, stat] : val) chars.insert(c);
  std::string out = "char,train_count,train_frequency,val_count,val_frequency\r\n";
  for (char32_t c : chars) {
    const auto t = train.count(c) ? train.at(c) : CharStat{};
    const auto v = val.count(c) ? val.at(c) : CharStat{};
    out += csv_field(utf8::encode(c)) + "," + std::to_string(t.count) + "," +
           format_double(t.frequency) + "," + std::to_string(v.count) + "," +
           format_double(v.frequency) + "\r\n";
  }
  return out;
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  json doc;
  doc["dataset"] = c.dataset.generic_string();
  doc["protocol"] = c.protocol;
  doc["folds"] = c.folds;
  doc["fold"] = c.fold ? json(*c.fold) : json(nullptr);
  doc["seed"] = c.seed;
  doc["tokenizer"] = c.tokenizer;
  doc["vocab_sizes"] = c.vocab_sizes;
  doc["concat"] = c.concat;
  doc["separator"] = c.separator;
  doc["epoch"] = c.epoch;
  doc["frame_subsample"] = c.frame_subsample;
  return doc;
}

void cmd_split(const ExperimentConfig& config, std::ostream& out) {
  const Splits s = load_splits(config);
  Manifest manifest(config.out, "split", config_to_json(config));
  manifest.write("folds.json", serialize_folds(s.folds, config.seed));
  for (std::size_t f : s.selected) {
    out << "fold " << f << ": " << s.folds[f].train_ids.size() << " train, "
        << s.folds[f].val_ids.size() << " val\n";
  }
  manifest.finish();
}

void cmd_train_tokenizer(const ExperimentConfig& config, std::ostream& out) {
  const Splits s = load_splits(config);
  Manifest manifest(config.out, "train-tokenizer", config_to_json(config));
  for (std::size_t f : s.selected) {
    const auto labels = labels_of(s.dataset, s.folds[f].train_ids);
    for (const auto& [v, name] : model_grid(config, f)) {
      const TokenizerModel model = train_for(config, labels, v);
      const fs::path rel = fs::path("tokenizers") / (name + ".json");
      manifest.write(rel, serialize_model(model));
      out << rel.generic_string() << ": " << model.vocab_size() << " tokens\n";
    }
  }
  manifest.finish();
}

void cmd_encode(const ExperimentConfig& config, std::ostream& out) {
  require_path(config.model, "--model");
  require_path(config.input, "--input");
  const TokenizerModel model = load_model(config.model);
  const std::string text = read_file(config.input);
  bool trailing = false;
  std::vector<std::string> lines;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text, trailing)) {
    ++line_no;
    TokenSequence ids;
    try {
      ids = encode(model, line);
    } catch (const InputError& e) {
      throw ParseError(line_no, e.what());
    }
    std::string row;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) row.push_back(' ');
      row += std::to_string(ids[i]);
    }
    lines.push_back(std::move(row));
  }
  write_output(config, join_lines(lines, trailing), out);
}

void cmd_decode(const ExperimentConfig& config, std::ostream& out) {
  require_path(config.model, "--model");
  require_path(config.input, "--input");
  const TokenizerModel model = load_model(config.model);
  const std::string text = read_file(config.input);
  bool trailing = false;
  std::vector<std::string> lines;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text, trailing)) {
    ++line_no;
    const TokenSequence ids = parse_token_line(line, line_no);
    try {
      lines.push_back(decode_tokens(model, ids));
    } catch (const InputError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  write_output(config, join_lines(lines, trailing), out);
}

void cmd_augment(const ExperimentConfig& config, std::ostream& out) {
  const Splits s = load_splits(config);
  std::optional<TokenizerModel> model;
  if (!config.model.empty()) model = load_model(config.model);
  AugmentPlan plan;
  plan.n_concat = config.concat;
  plan.seed = config.seed;
  plan.separator = config.separator;

  Manifest manifest(config.out, "augment", config_to_json(config));
  for (std::size_t f : s.selected) {
    const fs::path rel = fs::path("augment") /
                         ("fold" + std::to_string(f) + "_epoch" + std::to_string(config.epoch) + ".jsonl");
    const fs::path path = config.out / rel;
    fs::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError("cannot write " + path.string());
    AugmentEpoch stream(s.folds[f], s.dataset, plan, model ? &*model : nullptr, config.epoch);
    std::size_t n = 0;
    while (auto sample = stream.next()) {
      file << serialize_augmented(*sample) << '\n';
      ++n;
    }
    file.close();
    if (!file) throw InputError("write failed: " + path.string());
    manifest.record(rel);
    out << rel.generic_string() << ": " << n << " samples\n";
  }
  manifest.finish();
}

void cmd_score(const ExperimentConfig& config, std::ostream& out) {
  require_path(config.model, "--model");
  require_path(config.logits, "--logits");
  require_path(config.refs, "--refs");
  const fs::path index = config.index.empty() ? fs::path(config.logits.string() + ".index.jsonl")
                                              : config.index;
  const TokenizerModel model = load_model(config.model);
  const LogitArchive archive(config.logits, index);
  const auto refs = load_refs(config.refs);

  std::vector<std::string> ids, preds, labels;
  for (const auto& [id, ref] : refs) {
    if (!archive.contains(id)) throw InputError("no logits for sample '" + id + "'");
    const LogitMatrix logits = archive.read(id);
    if (logits.classes() != model.vocab_size() + 1) {
      throw DimensionMismatch("logits for '" + id + "' have " + std::to_string(logits.classes()) +
                              " classes, model expects " + std::to_string(model.vocab_size() + 1));
    }
    ids.push_back(id);
    preds.push_back(decode_tokens(model, greedy_decode(logits)));
    labels.push_back(ref);
  }
  const EvalReport report = evaluate(preds, labels, ids);
  Manifest manifest(config.out, "score", config_to_json(config));
  manifest.write("score.json", report_to_json(report) + "\n");
  manifest.finish();
  out << "CER " << format_double(report.cer) << " WER " << format_double(report.wer) << " ("
      << report.n_samples << " samples)\n";
}

void cmd_analyze(const ExperimentConfig& config, std::ostream& out) {
  const Splits s = load_splits(config);
  Manifest manifest(config.out, "analyze", config_to_json(config));
  json divergence = json::array();
  json usage = json::array();
  json feasibility = json::array();

  for (std::size_t f : s.selected) {
    const FoldSplit& fold = s.folds[f];
    const auto train_labels = labels_of(s.dataset, fold.train_ids);
    const auto val_labels = labels_of(s.dataset, fold.val_ids);
    const auto train_dist = char_distribution(train_labels);
    const auto val_dist = char_distribution(val_labels);
    const std::string tag = "fold" + std::to_string(f);
    manifest.write("analyze/" + tag + "_char_distribution.csv",
                   char_distribution_csv(train_dist, val_dist));

    const Divergence d = distribution_divergence(train_dist, val_dist);
    divergence.push_back({{"fold", f},
                          {"missing_in_val", char_list(d.missing_in_val)},
                          {"missing_in_train", char_list(d.missing_in_train)},
                          {"total_variation", d.total_variation}});

    for (const auto& [v, name] : model_grid(config, f)) {
      const TokenizerModel model = train_for(config, train_labels, v);
      // Validation labels may hold characters the training side never saw.
      std::vector<std::string> encodable;
      for (const auto& label : val_labels) {
        const auto cps = utf8::decode(label);
        if (std::all_of(cps.begin(), cps.end(), [&](char32_t c) { return model.covers(c); })) {
          encodable.push_back(label);
        }
      }
      const TokenUsageTable table = token_usage(model, encodable);
      manifest.write("analyze/usage_" + name + ".csv", token_usage_csv(table));
      usage.push_back({{"fold", f},
                       {"vocab_size", v},
                       {"model_vocab", model.vocab_size()},
                       {"tokens", table.total},
                       {"percent", table.percent},
                       {"skipped_labels", val_labels.size() - encodable.size()}});

      const FeasibilityReport r = feasibility_report(fold, s.dataset, model, config.frame_subsample);
      feasibility.push_back({{"fold", f},
                             {"vocab_size", v},
                             {"samples", r.samples},
                             {"infeasible", r.infeasible},
                             {"fraction", r.fraction},
                             {"mean_token_length", r.mean_token_length}});
    }
    out << tag << ": TV " << format_double(d.total_variation) << ", "
        << d.missing_in_val.size() << " chars missing in val\n";
  }

  manifest.write("analyze/divergence.json", divergence.dump(2) + "\n");
  manifest.write("analyze/token_usage.json", usage.dump(2) + "\n");
  manifest.write("analyze/feasibility.json", feasibility.dump(2) + "\n");
  std::string epochs = "n_concat,equivalent_epochs\r\n";
  for (std::size_t n = 0; n <= 4; ++n) {
    epochs += std::to_string(n) + "," + format_double(equivalent_epochs(n)) + "\r\n";
  }
  manifest.write("analyze/equivalent_epochs.csv", epochs);
  manifest.finish();
}

}  // namespace ohwr::cli
