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
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ohwr {

using TokenId = std::int32_t;
using TokenSequence = std::vector<TokenId>;

// CTC blank. Vocabulary ids start at 1.
inline constexpr TokenId kBlankId = 0;

enum class TokenizerKind { kBigram, kBpe, kUnigram };

std::string_view to_string(TokenizerKind kind);
TokenizerKind parse_tokenizer_kind(std::string_view text);

struct Merge {
  std::u32string left;
  std::u32string right;

  friend bool operator==(const Merge&, const Merge&) = default;
};

// An immutable trained tokenizer. The constructor checks every model
// invariant and throws SchemaError on violation, so a TokenizerModel value
// is always usable for encode/decode.
class TokenizerModel {
 public:
  // vocab[i] is the text of token id i + 1. merges is required for BPE and
  // must be empty otherwise; logp (indexed like vocab) is required for
  // Unigram and must be empty otherwise.
  TokenizerModel(TokenizerKind kind, std::u32string alphabet, std::vector<std::u32string> vocab,
                 std::vector<Merge> merges = {}, std::vector<double> logp = {});

  TokenizerKind kind() const { return kind_; }
  const std::u32string& alphabet() const { return alphabet_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  const std::vector<std::u32string>& vocab() const { return vocab_; }
  const std::vector<Merge>& merges() const { return merges_; }
  const std::vector<double>& logp() const { return logp_; }

  // Text of a vocabulary id. Throws UnknownToken for 0 or out-of-range ids.
  const std::u32string& token_text(TokenId id) const;
  std::optional<TokenId> find(std::u32string_view text) const;
  bool covers(char32_t cp) const;
  double token_logp(TokenId id) const { return logp_.at(static_cast<std::size_t>(id - 1)); }

  friend bool operator==(const TokenizerModel& a, const TokenizerModel& b) {
    return a.kind_ == b.kind_ && a.alphabet_ == b.alphabet_ && a.vocab_ == b.vocab_ &&
           a.merges_ == b.merges_ && a.logp_ == b.logp_;
  }

 private:
  void validate() const;

  TokenizerKind kind_;
  std::u32string alphabet_;
  std::vector<std::u32string> vocab_;
  std::vector<Merge> merges_;
  std::vector<double> logp_;
  std::map<std::u32string, TokenId, std::less<>> ids_;
};

struct UnigramConfig {
  std::size_t max_candidate_len = 8;
  std::size_t min_count = 2;
  int em_rounds = 2;
  double prune_fraction = 0.2;
};

// All trainers require a non-empty label list and V >= |alphabet|; they
// throw InvalidArgument otherwise. Vocabulary order is: single characters
// by code point, then multi-character tokens.

// Single characters plus the most frequent adjacent character pairs
// (ties by pair text).
TokenizerModel train_bigram(std::span<const std::string> labels, std::size_t vocab_size);

// Character-level model: the training alphabet and nothing else. Stored as
// a Bigram model without pairs.
TokenizerModel train_char(std::span<const std::string> labels);

// Greedy most-frequent-pair merging. A pair must occur at least twice to be
// merged; ties go to the smallest (left, right).
TokenizerModel train_bpe(std::span<const std::string> labels, std::size_t vocab_size);

TokenizerModel train_unigram(std::span<const std::string> labels, std::size_t vocab_size,
                             const UnigramConfig& config = {});

TokenizerModel train_tokenizer(TokenizerKind kind, std::span<const std::string> labels,
                               std::size_t vocab_size, const UnigramConfig& config = {});

// Bigram: greedy longest match. BPE: merges replayed in training order.
// Unigram: Viterbi, ties by fewer tokens then lexicographic token texts.
// Throws UnknownSymbol for characters outside the alphabet.
TokenSequence encode(const TokenizerModel& model, std::string_view text);
TokenSequence encode(const TokenizerModel& model, std::u32string_view text);

// Throws UnknownToken for ids outside the vocabulary (including blank).
std::string decode_tokens(const TokenizerModel& model, std::span<const TokenId> ids);

// {"version":1, "kind":..., "alphabet":[...], "vocab":[{"id":..,"text":..}],
//  "merges":[[l,r],...] (BPE), "logp":{"id":float,...} (Unigram)}
std::string serialize_model(const TokenizerModel& model);
TokenizerModel parse_model(std::string_view json);
void save_model(const TokenizerModel& model, const std::filesystem::path& path);
TokenizerModel load_model(const std::filesystem::path& path);

}  // namespace ohwr
