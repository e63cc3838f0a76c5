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

#include "ohwr/tokenizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ohwr/error.hpp"
#include "ohwr/utf8.hpp"
#include "tokenizer_internal.hpp"

namespace ohwr {

std::string_view to_string(TokenizerKind kind) {
  switch (kind) {
    case TokenizerKind::kBigram:
      return "bigram";
    case TokenizerKind::kBpe:
      return "bpe";
    case TokenizerKind::kUnigram:
      return "unigram";
  }
  return "unknown";
}

TokenizerKind parse_tokenizer_kind(std::string_view text) {
  if (text == "bigram") return TokenizerKind::kBigram;
  if (text == "bpe") return TokenizerKind::kBpe;
  if (text == "unigram") return TokenizerKind::kUnigram;
  throw InvalidArgument("unknown tokenizer kind '" + std::string(text) + "'");
}

TokenizerModel::TokenizerModel(TokenizerKind kind, std::u32string alphabet,
                               std::vector<std::u32string> vocab, std::vector<Merge> merges,
                               std::vector<double> logp)
    : kind_(kind),
      alphabet_(std::move(alphabet)),
      vocab_(std::move(vocab)),
      merges_(std::move(merges)),
      logp_(std::move(logp)) {
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!ids_.emplace(vocab_[i], static_cast<TokenId>(i + 1)).second) {
      throw SchemaError("duplicate token text '" + utf8::encode(vocab_[i]) + "'");
    }
  }
  validate();
}

void TokenizerModel::validate() const {
  for (std::size_t i = 1; i < alphabet_.size(); ++i) {
    if (alphabet_[i - 1] >= alphabet_[i]) throw SchemaError("alphabet must be sorted and unique");
  }
  for (char32_t cp : alphabet_) {
    if (!find(std::u32string(1, cp))) {
      throw SchemaError("alphabet character " + utf8::describe(cp) +
                        " has no single-character token");
    }
  }
  for (const std::u32string& token : vocab_) {
    if (token.empty()) throw SchemaError("empty token text");
    for (char32_t cp : token) {
      if (!covers(cp)) {
        throw SchemaError("token '" + utf8::encode(token) + "' uses a character outside the alphabet");
      }
    }
    if (kind_ == TokenizerKind::kBigram && token.size() > 2) {
      throw SchemaError("bigram token '" + utf8::encode(token) + "' is longer than 2");
    }
  }

  if (kind_ != TokenizerKind::kBpe && !merges_.empty()) {
    throw SchemaError("only BPE models carry merges");
  }
  if (kind_ == TokenizerKind::kBpe) {
    std::set<std::u32string> products;
    for (const Merge& m : merges_) {
      if (m.left.empty() || m.right.empty()) throw SchemaError("merge with empty side");
      if (!find(m.left) || !find(m.right)) {
        throw SchemaError("merge operand '" + utf8::encode(m.left) + "'/'" + utf8::encode(m.right) +
                          "' is not a token");
      }
      products.insert(m.left + m.right);
    }
    for (const std::u32string& token : vocab_) {
      if (token.size() > 1 && !products.count(token)) {
        throw SchemaError("BPE token '" + utf8::encode(token) + "' is not produced by any merge");
      }
    }
    for (const std::u32string& p : products) {
      if (!find(p)) throw SchemaError("merge product '" + utf8::encode(p) + "' missing from vocab");
    }
  }

  if (kind_ != TokenizerKind::kUnigram && !logp_.empty()) {
    throw SchemaError("only Unigram models carry log-probabilities");
  }
  if (kind_ == TokenizerKind::kUnigram) {
    if (logp_.size() != vocab_.size()) {
      throw SchemaError("Unigram model needs one log-probability per token");
    }
    double mass = 0.0;
    for (double lp : logp_) {
      if (!std::isfinite(lp) || lp > 0.0) throw SchemaError("invalid token log-probability");
      mass += std::exp(lp);
    }
    if (!vocab_.empty() && std::abs(mass - 1.0) > 1e-6) {
      throw SchemaError("Unigram probabilities sum to " + std::to_string(mass));
    }
  }
}

const std::u32string& TokenizerModel::token_text(TokenId id) const {
  if (id < 1 || static_cast<std::size_t>(id) > vocab_.size()) {
    throw UnknownToken("unknown token id " + std::to_string(id));
  }
  return vocab_[static_cast<std::size_t>(id - 1)];
}

std::optional<TokenId> TokenizerModel::find(std::u32string_view text) const {
  auto it = ids_.find(text);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool TokenizerModel::covers(char32_t cp) const {
  return std::binary_search(alphabet_.begin(), alphabet_.end(), cp);
}

namespace {

void check_coverage(const TokenizerModel& model, std::u32string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!model.covers(text[i])) throw UnknownSymbol(text[i], i);
  }
}

TokenSequence encode_greedy(const TokenizerModel& model, std::u32string_view text) {
  TokenSequence out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (i + 1 < text.size()) {
      if (auto pair = model.find(text.substr(i, 2))) {
        out.push_back(*pair);
        i += 2;
        continue;
      }
    }
    out.push_back(*model.find(text.substr(i, 1)));
    ++i;
  }
  return out;
}

TokenSequence encode_bpe(const TokenizerModel& model, std::u32string_view text) {
  std::vector<std::u32string> symbols;
  symbols.reserve(text.size());
  for (char32_t cp : text) symbols.emplace_back(1, cp);
  for (const Merge& m : model.merges()) {
    if (symbols.size() < 2) break;
    apply_merge(symbols, m.left, m.right);
  }
  TokenSequence out;
  out.reserve(symbols.size());
  for (const auto& s : symbols) out.push_back(*model.find(s));
  return out;
}

}  // namespace

void apply_merge(std::vector<std::u32string>& symbols, std::u32string_view left,
                 std::u32string_view right) {
  std::size_t write = 0;
  std::size_t i = 0;
  while (i < symbols.size()) {
    if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
      symbols[write] = symbols[i] + symbols[i + 1];
      i += 2;
    } else {
      if (write != i) symbols[write] = std::move(symbols[i]);
      ++i;
    }
    ++write;
  }
  symbols.resize(write);
}

TokenSequence viterbi_segment(const TokenizerModel& model, std::u32string_view text) {
  struct Cell {
    double score = -std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    std::size_t from = 0;
    TokenId token = kBlankId;
  };
  std::size_t max_len = 1;
  for (const auto& t : model.vocab()) max_len = std::max(max_len, t.size());

  const std::size_t n = text.size();
  std::vector<Cell> best(n + 1);
  best[0].score = 0.0;

  auto path_of = [&](std::size_t from, TokenId last) {
    std::vector<std::u32string_view> path{model.token_text(last)};
    for (std::size_t at = from; at > 0; at = best[at].from) {
      path.push_back(model.token_text(best[at].token));
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  for (std::size_t end = 1; end <= n; ++end) {
    Cell& cell = best[end];
    for (std::size_t len = 1; len <= std::min(max_len, end); ++len) {
      const std::size_t start = end - len;
      if (best[start].token == kBlankId && start != 0) continue;
      auto id = model.find(text.substr(start, len));
      if (!id) continue;
      const double score = best[start].score + model.token_logp(*id);
      const std::size_t count = best[start].count + 1;
      bool better = false;
      if (cell.token == kBlankId || score > cell.score) {
        better = true;
      } else if (score == cell.score) {
        if (count != cell.count) {
          better = count < cell.count;
        } else {
          better = path_of(start, *id) < path_of(cell.from, cell.token);
        }
      }
      if (better) cell = Cell{score, count, start, *id};
    }
  }

  TokenSequence out;
  for (std::size_t at = n; at > 0; at = best[at].from) out.push_back(best[at].token);
  std::reverse(out.begin(), out.end());
  return out;
}

TokenSequence encode(const TokenizerModel& model, std::u32string_view text) {
  check_coverage(model, text);
  switch (model.kind()) {
    case TokenizerKind::kBigram:
      return encode_greedy(model, text);
    case TokenizerKind::kBpe:
      return encode_bpe(model, text);
    case TokenizerKind::kUnigram:
      return viterbi_segment(model, text);
  }
  throw Error("unreachable tokenizer kind");
}

TokenSequence encode(const TokenizerModel& model, std::string_view text) {
  return encode(model, std::u32string_view(utf8::decode(text)));
}

std::string decode_tokens(const TokenizerModel& model, std::span<const TokenId> ids) {
  std::u32string text;
  for (TokenId id : ids) text += model.token_text(id);
  return utf8::encode(text);
}

std::u32string collect_alphabet(std::span<const std::string> labels) {
  std::set<char32_t> chars;
  for (const std::string& label : labels) {
    for (char32_t cp : utf8::decode(label)) chars.insert(cp);
  }
  return std::u32string(chars.begin(), chars.end());
}

void check_training_input(std::span<const std::string> labels, std::size_t alphabet_size,
                          std::size_t vocab_size) {
  if (labels.empty()) throw InvalidArgument("cannot train a tokenizer on an empty label list");
  if (vocab_size < alphabet_size) {
    throw InvalidArgument("vocabulary size " + std::to_string(vocab_size) +
                          " is smaller than the alphabet (" + std::to_string(alphabet_size) + ")");
  }
}

TokenizerModel train_char(std::span<const std::string> labels) {
  std::u32string alphabet = collect_alphabet(labels);
  check_training_input(labels, alphabet.size(), alphabet.size());
  std::vector<std::u32string> vocab;
  for (char32_t cp : alphabet) vocab.emplace_back(1, cp);
  return TokenizerModel(TokenizerKind::kBigram, std::move(alphabet), std::move(vocab));
}

TokenizerModel train_tokenizer(TokenizerKind kind, std::span<const std::string> labels,
                               std::size_t vocab_size, const UnigramConfig& config) {
  switch (kind) {
    case TokenizerKind::kBigram:
      return train_bigram(labels, vocab_size);
    case TokenizerKind::kBpe:
      return train_bpe(labels, vocab_size);
    case TokenizerKind::kUnigram:
      return train_unigram(labels, vocab_size, config);
  }
  throw Error("unreachable tokenizer kind");
}

}  // namespace ohwr
