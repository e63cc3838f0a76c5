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

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ohwr/tokenizer.hpp"

namespace ohwr {

struct EditCounts {
  std::size_t distance = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;   // symbols of `hyp` with no counterpart in `ref`
  std::size_t insertions = 0;  // symbols of `ref` missing from `hyp`

  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

// Unit-cost Levenshtein distance turning hyp into ref. The decomposition
// follows one optimal alignment, traced back from the end preferring
// substitution (or match), then deletion, then insertion.
template <typename Seq>
EditCounts edit_distance_seq(const Seq& hyp, const Seq& ref);

// Character-level (code point) distance between two UTF-8 strings.
EditCounts edit_distance(std::string_view hyp, std::string_view ref);

std::vector<std::string> split_words(std::string_view text);

// Corpus-normalized rates in percent: 100 * sum(edits) / sum(reference
// lengths). Throws InvalidArgument on size mismatch or an empty reference.
double cer(std::span<const std::string> preds, std::span<const std::string> refs);
double wer(std::span<const std::string> preds, std::span<const std::string> refs);

struct SampleEdits {
  std::string id;
  std::size_t char_edits = 0;
  std::size_t ref_len = 0;

  friend bool operator==(const SampleEdits&, const SampleEdits&) = default;
};

struct EvalReport {
  double cer = 0.0;
  double wer = 0.0;
  std::size_t n_samples = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_chars = 0;
  std::size_t word_edits = 0;
  std::size_t ref_words = 0;
  std::optional<std::vector<SampleEdits>> per_sample;
};

// ids may be empty, in which case per-sample rows are numbered.
EvalReport evaluate(std::span<const std::string> preds, std::span<const std::string> refs,
                    std::span<const std::string> ids = {}, bool keep_per_sample = true);

std::string report_to_json(const EvalReport& report);

// Share of emitted tokens by character length, buckets 1, 2, 3, 4 and 5+.
struct TokenUsageTable {
  std::array<std::size_t, 5> counts{};
  std::array<double, 5> percent{};
  std::size_t total = 0;
};

TokenUsageTable token_usage(const TokenizerModel& model, std::span<const std::string> labels);
TokenUsageTable token_usage_of(const TokenizerModel& model,
                               std::span<const TokenSequence> sequences);

// "size,percent" with rows 1,2,3,4,5+.
std::string token_usage_csv(const TokenUsageTable& table);

// ---------------------------------------------------------------------------

template <typename Seq>
EditCounts edit_distance_seq(const Seq& hyp, const Seq& ref) {
  const std::size_t n = hyp.size();
  const std::size_t m = ref.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  for (std::size_t i = 0; i <= n; ++i) d[at(i, 0)] = i;
  for (std::size_t j = 0; j <= m; ++j) d[at(0, j)] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = d[at(i - 1, j - 1)] + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      d[at(i, j)] = std::min({diag, d[at(i - 1, j)] + 1, d[at(i, j - 1)] + 1});
    }
  }

  EditCounts out;
  out.distance = d[at(n, m)];
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = d[at(i, j)];
    if (i > 0 && j > 0) {
      const bool same = hyp[i - 1] == ref[j - 1];
      if (d[at(i - 1, j - 1)] + (same ? 0 : 1) == here) {
        if (!same) ++out.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && d[at(i - 1, j)] + 1 == here) {
      ++out.deletions;
      --i;
    } else {
      ++out.insertions;
      --j;
    }
  }
  return out;
}

}  // namespace ohwr
