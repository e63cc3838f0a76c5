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

#include "ohwr/eval.hpp"

#include <algorithm>
#include <charconv>
#include <json.hpp>

#include "ohwr/error.hpp"
#include "ohwr/utf8.hpp"

namespace ohwr {
namespace {

void check_pairs(std::span<const std::string> preds, std::span<const std::string> refs) {
  if (preds.size() != refs.size()) {
    throw InvalidArgument("got " + std::to_string(preds.size()) + " predictions for " +
                          std::to_string(refs.size()) + " references");
  }
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (refs[i].empty()) throw InvalidArgument("reference " + std::to_string(i) + " is empty");
  }
}

double percent(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

EditCounts edit_distance(std::string_view hyp, std::string_view ref) {
  return edit_distance_seq(utf8::decode(hyp), utf8::decode(ref));
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  while (i < text.size()) {
    while (i < text.size() && space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !space(text[i])) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

EvalReport evaluate(std::span<const std::string> preds, std::span<const std::string> refs,
                    std::span<const std::string> ids, bool keep_per_sample) {
  check_pairs(preds, refs);
  if (!ids.empty() && ids.size() != refs.size()) {
    throw InvalidArgument("id list does not match the reference count");
  }
  EvalReport report;
  report.n_samples = refs.size();
  std::vector<SampleEdits> rows;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const std::u32string ref = utf8::decode(refs[i]);
    const EditCounts chars = edit_distance_seq(utf8::decode(preds[i]), ref);
    report.substitutions += chars.substitutions;
    report.deletions += chars.deletions;
    report.insertions += chars.insertions;
    report.ref_chars += ref.size();

    const auto ref_words = split_words(refs[i]);
    const EditCounts words = edit_distance_seq(split_words(preds[i]), ref_words);
    report.word_edits += words.distance;
    report.ref_words += ref_words.size();

    if (keep_per_sample) {
      rows.push_back({ids.empty() ? std::to_string(i) : ids[i], chars.distance, ref.size()});
    }
  }
  if (report.n_samples > 0 && report.ref_words == 0) {
    throw InvalidArgument("references contain no words");
  }
  const std::size_t char_edits = report.substitutions + report.deletions + report.insertions;
  report.cer = percent(char_edits, report.ref_chars);
  report.wer = percent(report.word_edits, report.ref_words);
  if (keep_per_sample) report.per_sample = std::move(rows);
  return report;
}

double cer(std::span<const std::string> preds, std::span<const std::string> refs) {
  return evaluate(preds, refs, {}, false).cer;
}

double wer(std::span<const std::string> preds, std::span<const std::string> refs) {
  return evaluate(preds, refs, {}, false).wer;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json doc;
  doc["cer"] = report.cer;
  doc["wer"] = report.wer;
  doc["n_samples"] = report.n_samples;
  doc["substitutions"] = report.substitutions;
  doc["deletions"] = report.deletions;
  doc["insertions"] = report.insertions;
  doc["ref_chars"] = report.ref_chars;
  doc["word_edits"] = report.word_edits;
  doc["ref_words"] = report.ref_words;
  if (report.per_sample) {
    auto rows = nlohmann::ordered_json::array();
    for (const SampleEdits& s : *report.per_sample) {
      rows.push_back({{"id", s.id}, {"char_edits", s.char_edits}, {"ref_len", s.ref_len}});
    }
    doc["per_sample"] = std::move(rows);
  }
  return doc.dump(2) + "\n";
}

TokenUsageTable token_usage_of(const TokenizerModel& model,
                               std::span<const TokenSequence> sequences) {
  TokenUsageTable table;
  for (const TokenSequence& seq : sequences) {
    for (TokenId id : seq) {
      const std::size_t len = model.token_text(id).size();
      ++table.counts[std::min<std::size_t>(len, 5) - 1];
      ++table.total;
    }
  }
  for (std::size_t b = 0; b < table.counts.size(); ++b) {
    table.percent[b] = percent(table.counts[b], table.total);
  }
  return table;
}

TokenUsageTable token_usage(const TokenizerModel& model, std::span<const std::string> labels) {
  std::vector<TokenSequence> sequences;
  sequences.reserve(labels.size());
  for (const std::string& label : labels) sequences.push_back(encode(model, label));
  return token_usage_of(model, sequences);
}

std::string token_usage_csv(const TokenUsageTable& table) {
  static constexpr const char* kSizes[] = {"1", "2", "3", "4", "5+"};
  std::string out = "size,percent\r\n";
  for (std::size_t b = 0; b < table.percent.size(); ++b) {
    out += kSizes[b];
    out += ',';
    out += format_double(table.percent[b]);
    out += "\r\n";
  }
  return out;
}

}  // namespace ohwr
