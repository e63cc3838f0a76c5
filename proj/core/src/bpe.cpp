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

#include <map>
#include <set>
#include <tuple>

#include "ohwr/tokenizer.hpp"
#include "ohwr/utf8.hpp"
#include "tokenizer_internal.hpp"

namespace ohwr {
namespace {

using Symbol = int;
using Pair = std::pair<Symbol, Symbol>;

// Calls fn(pair) once per occurrence that a left-to-right merge of that
// pair would consume: a run of r equal symbols yields floor(r / 2) pairs.
template <typename Fn>
void for_each_pair(const std::vector<Symbol>& s, Fn&& fn) {
  bool skip_same = false;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == s[i + 1]) {
      if (skip_same) {
        skip_same = false;
        continue;
      }
      skip_same = true;
    } else {
      skip_same = false;
    }
    fn(Pair{s[i], s[i + 1]});
  }
}

class BpeTrainer {
 public:
  BpeTrainer(std::span<const std::string> labels, const std::u32string& alphabet) {
    for (char32_t cp : alphabet) intern(std::u32string(1, cp));
    std::map<std::u32string, long> word_freq;
    for (const std::string& label : labels) ++word_freq[utf8::decode(label)];
    for (const auto& [text, freq] : word_freq) {
      Word w{{}, freq};
      for (char32_t cp : text) w.symbols.push_back(intern(std::u32string(1, cp)));
      words_.push_back(std::move(w));
    }
    for (std::size_t i = 0; i < words_.size(); ++i) add_word_pairs(i);
  }

  // Runs merges until the vocabulary reaches vocab_size or no pair occurs
  // at least twice.
  void run(std::size_t vocab_size, std::size_t alphabet_size) {
    std::size_t vocab = alphabet_size;
    while (vocab < vocab_size && !queue_.empty()) {
      const auto [neg_count, left_text, right_text, pair] = *queue_.begin();
      if (-neg_count < 2) break;
      const std::u32string product = left_text + right_text;
      const bool is_new = !symbol_ids_.count(product);
      const Symbol merged = intern(product);
      merges_.push_back({left_text, right_text});
      if (is_new) {
        products_.push_back(product);
        ++vocab;
      }

      const std::set<std::size_t> touched = where_[pair];
      for (std::size_t w : touched) {
        if (!contains(words_[w].symbols, pair)) continue;
        remove_word_pairs(w);
        merge_in_word(words_[w].symbols, pair, merged);
        add_word_pairs(w);
      }
    }
  }

  std::vector<Merge> merges() const { return merges_; }
  std::vector<std::u32string> products() const { return products_; }

 private:
  struct Word {
    std::vector<Symbol> symbols;
    long freq;
  };
  using Key = std::tuple<long, std::u32string, std::u32string, Pair>;

  Symbol intern(const std::u32string& text) {
    auto [it, inserted] = symbol_ids_.emplace(text, static_cast<Symbol>(texts_.size()));
    if (inserted) texts_.push_back(text);
    return it->second;
  }

  static bool contains(const std::vector<Symbol>& s, Pair p) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      if (s[i] == p.first && s[i + 1] == p.second) return true;
    }
    return false;
  }

  static void merge_in_word(std::vector<Symbol>& s, Pair p, Symbol merged) {
    std::vector<Symbol> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
      if (i + 1 < s.size() && s[i] == p.first && s[i + 1] == p.second) {
        out.push_back(merged);
        i += 2;
      } else {
        out.push_back(s[i++]);
      }
    }
    s = std::move(out);
  }

  void adjust(Pair p, long delta) {
    long& count = counts_[p];
    if (count > 0) queue_.erase(Key{-count, texts_[p.first], texts_[p.second], p});
    count += delta;
    if (count > 0) {
      queue_.insert(Key{-count, texts_[p.first], texts_[p.second], p});
    } else {
      counts_.erase(p);
    }
  }

  void add_word_pairs(std::size_t w) {
    for_each_pair(words_[w].symbols, [&](Pair p) {
      adjust(p, words_[w].freq);
      where_[p].insert(w);
    });
  }

  void remove_word_pairs(std::size_t w) {
    for_each_pair(words_[w].symbols, [&](Pair p) { adjust(p, -words_[w].freq); });
  }

  std::vector<std::u32string> texts_;
  std::map<std::u32string, Symbol> symbol_ids_;
  std::vector<Word> words_;
  std::map<Pair, long> counts_;
  std::map<Pair, std::set<std::size_t>> where_;
  std::set<Key> queue_;
  std::vector<Merge> merges_;
  std::vector<std::u32string> products_;
};

}  // namespace

TokenizerModel train_bpe(std::span<const std::string> labels, std::size_t vocab_size) {
  std::u32string alphabet = collect_alphabet(labels);
  check_training_input(labels, alphabet.size(), vocab_size);

  BpeTrainer trainer(labels, alphabet);
  trainer.run(vocab_size, alphabet.size());

  std::vector<std::u32string> vocab;
  for (char32_t cp : alphabet) vocab.emplace_back(1, cp);
  for (auto& p : trainer.products()) vocab.push_back(std::move(p));
  return TokenizerModel(TokenizerKind::kBpe, std::move(alphabet), std::move(vocab),
                        trainer.merges());
}

}  // namespace ohwr
