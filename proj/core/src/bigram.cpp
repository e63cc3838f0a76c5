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

#include <algorithm>
#include <map>

#include "ohwr/tokenizer.hpp"
#include "ohwr/utf8.hpp"
#include "tokenizer_internal.hpp"

namespace ohwr {

TokenizerModel train_bigram(std::span<const std::string> labels, std::size_t vocab_size) {
  std::u32string alphabet = collect_alphabet(labels);
  check_training_input(labels, alphabet.size(), vocab_size);

  std::map<std::u32string, std::size_t> pair_counts;
  for (const std::string& label : labels) {
    const std::u32string text = utf8::decode(label);
    for (std::size_t i = 0; i + 1 < text.size(); ++i) ++pair_counts[text.substr(i, 2)];
  }

  std::vector<std::pair<std::u32string, std::size_t>> ranked(pair_counts.begin(),
                                                              pair_counts.end());
  // pair_counts is already in text order, so a stable sort on count keeps
  // lexicographic tie-breaking.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<std::u32string> vocab;
  for (char32_t cp : alphabet) vocab.emplace_back(1, cp);
  const std::size_t budget = vocab_size - alphabet.size();
  for (std::size_t i = 0; i < std::min(budget, ranked.size()); ++i) {
    vocab.push_back(ranked[i].first);
  }
  return TokenizerModel(TokenizerKind::kBigram, std::move(alphabet), std::move(vocab));
}

}  // namespace ohwr
