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

// Brute-force reference implementations used only by tests. None of these
// call into the library code paths they are compared against.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ohwr/utf8.hpp"

namespace oracle {

// ---------------------------------------------------------------- BPE

struct BpeResult {
  std::vector<std::pair<std::u32string, std::u32string>> merges;
  std::vector<std::u32string> vocab;  // characters, then new merge products
};

// Number of merges a left-to-right scan would perform for (l, r).
inline std::size_t scan_count(const std::vector<std::u32string>& w, const std::u32string& l,
                              const std::u32string& r) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i + 1 < w.size()) {
    if (w[i] == l && w[i + 1] == r) {
      ++count;
      i += 2;
    } else {
      ++i;
    }
  }
  return count;
}

// Recounts every pair from scratch after every merge.
inline BpeResult bpe(const std::vector<std::string>& labels, std::size_t vocab_size) {
  std::set<char32_t> chars;
  std::vector<std::vector<std::u32string>> words;
  for (const auto& label : labels) {
    std::vector<std::u32string> w;
    for (char32_t c : ohwr::utf8::decode(label)) {
      w.emplace_back(1, c);
      chars.insert(c);
    }
    words.push_back(std::move(w));
  }
  BpeResult out;
  std::set<std::u32string> vocab;
  for (char32_t c : chars) {
    out.vocab.emplace_back(1, c);
    vocab.insert(std::u32string(1, c));
  }
  while (vocab.size() < vocab_size) {
    std::set<std::pair<std::u32string, std::u32string>> candidates;
    for (const auto& w : words) {
      for (std::size_t i = 0; i + 1 < w.size(); ++i) candidates.insert({w[i], w[i + 1]});
    }
    if (candidates.empty()) break;
    std::size_t best_count = 0;
    std::pair<std::u32string, std::u32string> best;
    for (const auto& c : candidates) {  // ascending, so the first maximum wins ties
      std::size_t total = 0;
      for (const auto& w : words) total += scan_count(w, c.first, c.second);
      if (total > best_count) {
        best_count = total;
        best = c;
      }
    }
    if (best_count < 2) break;
    out.merges.push_back(best);
    const std::u32string product = best.first + best.second;
    if (vocab.insert(product).second) out.vocab.push_back(product);
    for (auto& w : words) {
      std::vector<std::u32string> next;
      std::size_t i = 0;
      while (i < w.size()) {
        if (i + 1 < w.size() && w[i] == best.first && w[i + 1] == best.second) {
          next.push_back(product);
          i += 2;
        } else {
          next.push_back(w[i++]);
        }
      }
      w = std::move(next);
    }
  }
  return out;
}

// ------------------------------------------------------- segmentations

// Calls fn(pieces) for each of the 2^(n-1) segmentations of text.
inline void for_each_segmentation(const std::u32string& text,
                                  const std::function<void(const std::vector<std::u32string>&)>& fn) {
  const std::size_t n = text.size();
  if (n == 0) {
    fn({});
    return;
  }
  const std::size_t cuts = n - 1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << cuts); ++mask) {
    std::vector<std::u32string> pieces;
    std::size_t start = 0;
    for (std::size_t i = 0; i < cuts; ++i) {
      if (mask & (std::size_t{1} << i)) {
        pieces.push_back(text.substr(start, i + 1 - start));
        start = i + 1;
      }
    }
    pieces.push_back(text.substr(start));
    fn(pieces);
  }
}

struct SegmentationSummary {
  double best_logp = -std::numeric_limits<double>::infinity();
  double log_total = -std::numeric_limits<double>::infinity();
  std::size_t valid = 0;
};

inline SegmentationSummary enumerate_segmentations(
    const std::u32string& text, const std::map<std::u32string, double>& logp) {
  SegmentationSummary s;
  double total = 0.0;
  for_each_segmentation(text, [&](const std::vector<std::u32string>& pieces) {
    double lp = 0.0;
    for (const auto& p : pieces) {
      auto it = logp.find(p);
      if (it == logp.end()) return;
      lp += it->second;
    }
    ++s.valid;
    s.best_logp = std::max(s.best_logp, lp);
    total += std::exp(lp);
  });
  if (s.valid > 0) s.log_total = std::log(total);
  return s;
}

// ----------------------------------------------------------------- CTC

inline std::vector<int> collapse(const std::vector<int>& path) {
  std::vector<int> out;
  int prev = 0;
  for (int c : path) {
    if (c != 0 && c != prev) out.push_back(c);
    prev = c;
  }
  return out;
}

// Sum of path probabilities per collapsed label sequence, over all
// classes^T paths. probs[t][c] are probabilities (not logs).
inline std::map<std::vector<int>, double> alignment_sums(
    const std::vector<std::vector<double>>& probs) {
  std::map<std::vector<int>, double> out;
  const std::size_t frames = probs.size();
  const std::size_t classes = frames ? probs[0].size() : 0;
  std::vector<int> path(frames, 0);
  for (;;) {
    double p = 1.0;
    for (std::size_t t = 0; t < frames; ++t) p *= probs[t][static_cast<std::size_t>(path[t])];
    out[collapse(path)] += p;
    std::size_t t = 0;
    while (t < frames && static_cast<std::size_t>(++path[t]) == classes) path[t++] = 0;
    if (t == frames) break;
  }
  return out;
}

// Depth-first search for any frame-level path of length T that collapses to
// target, pruning paths whose collapsed prefix already disagrees.
inline bool alignment_exists(std::size_t frames, const std::vector<int>& target) {
  std::set<int> symbols{0};
  for (int c : target) symbols.insert(c);
  std::function<bool(std::size_t, int, std::size_t)> search = [&](std::size_t t, int prev,
                                                                   std::size_t emitted) -> bool {
    if (target.size() - emitted > frames - t) return false;
    if (t == frames) return emitted == target.size();
    for (int c : symbols) {
      std::size_t next = emitted;
      if (c != 0 && c != prev) {
        if (emitted >= target.size() || target[emitted] != c) continue;
        ++next;
      }
      if (search(t + 1, c, next)) return true;
    }
    return false;
  };
  return search(0, 0, 0);
}

// --------------------------------------------------------- edit distance

// Top-down memoized recursion on the Levenshtein definition.
template <typename Seq>
std::size_t levenshtein(const Seq& a, const Seq& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i,
                                                              std::size_t j) -> std::size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = go(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
    best = std::min(best, go(i - 1, j) + 1);
    best = std::min(best, go(i, j - 1) + 1);
    memo[key] = best;
    return best;
  };
  return go(a.size(), b.size());
}

}  // namespace oracle
