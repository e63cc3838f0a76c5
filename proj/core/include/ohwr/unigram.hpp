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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ohwr/tokenizer.hpp"

namespace ohwr::unigram {

// Log of the total probability of `text` summed over every segmentation
// into pieces of `model` (forward algorithm). -inf if no segmentation exists.
double log_marginal(const TokenizerModel& model, std::u32string_view text);

// Sum of log_marginal over labels.
double corpus_log_likelihood(const TokenizerModel& model, std::span<const std::string> labels);

// Unigram language-model trainer, exposed step by step so callers can
// observe the likelihood after each EM iteration.
//
// The seed vocabulary is every substring of length 2..max_candidate_len that
// occurs at least min_count times, plus every single character, with
// probabilities proportional to occurrence counts.
class Trainer {
 public:
  Trainer(std::span<const std::string> labels, const UnigramConfig& config);

  // One EM iteration: expected piece counts under all segmentations
  // (forward-backward), then re-normalized counts as new probabilities.
  void em_step();

  // Removes the multi-character pieces whose removal costs the least corpus
  // likelihood: prune_fraction of them (at least one), never going below
  // target_size and never touching single characters. Survivors are
  // renormalized.
  void prune(std::size_t target_size);

  double corpus_log_likelihood() const;
  std::size_t size() const { return pieces_.size(); }
  std::size_t multi_char_count() const;
  const std::vector<std::u32string>& pieces() const { return pieces_; }
  const std::vector<double>& logp() const { return logp_; }

  // Final model: characters first, multi-character pieces in text order.
  // Multi-character pieces with zero probability are dropped and characters
  // with zero probability get a small floor before renormalization.
  TokenizerModel build() const;

 private:
  struct Word {
    std::u32string text;
    double freq;
  };
  struct Edge {
    std::size_t start;
    std::size_t end;
    std::size_t piece;
  };

  std::vector<Edge> edges_of(const std::u32string& text) const;
  // Forward pass in log space with one piece optionally disabled.
  double word_log_marginal(const std::vector<Edge>& edges, std::size_t n,
                           std::size_t disabled) const;
  void rebuild_index();

  UnigramConfig config_;
  std::u32string alphabet_;
  std::vector<Word> words_;
  std::vector<std::u32string> pieces_;
  std::vector<double> logp_;
  std::map<std::u32string, std::size_t, std::less<>> index_;
  std::size_t max_len_ = 1;
};

}  // namespace ohwr::unigram
