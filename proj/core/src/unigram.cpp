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

#include "ohwr/unigram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ohwr/error.hpp"
#include "ohwr/utf8.hpp"
#include "tokenizer_internal.hpp"

namespace ohwr::unigram {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
// Probability given to characters whose expected count fell to zero.
constexpr double kCharFloor = 1e-12;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

double log_marginal(const TokenizerModel& model, std::u32string_view text) {
  if (model.kind() != TokenizerKind::kUnigram) {
    throw InvalidArgument("log_marginal needs a Unigram model");
  }
  std::size_t max_len = 1;
  for (const auto& t : model.vocab()) max_len = std::max(max_len, t.size());
  std::vector<double> alpha(text.size() + 1, kNegInf);
  alpha[0] = 0.0;
  for (std::size_t end = 1; end <= text.size(); ++end) {
    for (std::size_t len = 1; len <= std::min(max_len, end); ++len) {
      if (auto id = model.find(text.substr(end - len, len))) {
        alpha[end] = log_add(alpha[end], alpha[end - len] + model.token_logp(*id));
      }
    }
  }
  return alpha[text.size()];
}

double corpus_log_likelihood(const TokenizerModel& model, std::span<const std::string> labels) {
  double total = 0.0;
  for (const std::string& label : labels) total += log_marginal(model, utf8::decode(label));
  return total;
}

Trainer::Trainer(std::span<const std::string> labels, const UnigramConfig& config)
    : config_(config), alphabet_(collect_alphabet(labels)) {
  if (config_.max_candidate_len < 1) throw InvalidArgument("max_candidate_len must be >= 1");
  if (config_.em_rounds < 0) throw InvalidArgument("em_rounds must be >= 0");
  if (!(config_.prune_fraction > 0.0 && config_.prune_fraction <= 1.0)) {
    throw InvalidArgument("prune_fraction must be in (0, 1]");
  }

  std::map<std::u32string, double> word_freq;
  for (const std::string& label : labels) word_freq[utf8::decode(label)] += 1.0;
  for (auto& [text, freq] : word_freq) words_.push_back({text, freq});

  std::map<std::u32string, double> counts;
  for (const Word& w : words_) {
    for (std::size_t i = 0; i < w.text.size(); ++i) {
      const std::size_t longest = std::min(config_.max_candidate_len, w.text.size() - i);
      for (std::size_t len = 1; len <= longest; ++len) counts[w.text.substr(i, len)] += w.freq;
    }
  }
  double total = 0.0;
  for (const auto& [text, count] : counts) {
    if (text.size() == 1 || count >= static_cast<double>(config_.min_count)) {
      pieces_.push_back(text);
      logp_.push_back(count);
      total += count;
    }
  }
  for (double& lp : logp_) lp = std::log(lp / total);
  rebuild_index();
}

void Trainer::rebuild_index() {
  index_.clear();
  max_len_ = 1;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    index_.emplace(pieces_[i], i);
    max_len_ = std::max(max_len_, pieces_[i].size());
  }
}

std::size_t Trainer::multi_char_count() const {
  return static_cast<std::size_t>(std::count_if(
      pieces_.begin(), pieces_.end(), [](const std::u32string& p) { return p.size() > 1; }));
}

std::vector<Trainer::Edge> Trainer::edges_of(const std::u32string& text) const {
  std::vector<Edge> edges;
  for (std::size_t start = 0; start < text.size(); ++start) {
    const std::size_t longest = std::min(max_len_, text.size() - start);
    for (std::size_t len = 1; len <= longest; ++len) {
      auto it = index_.find(std::u32string_view(text).substr(start, len));
      if (it != index_.end()) edges.push_back({start, start + len, it->second});
    }
  }
  // Sorted by end so a single pass computes the forward variables.
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& a, const Edge& b) { return a.end < b.end; });
  return edges;
}

double Trainer::word_log_marginal(const std::vector<Edge>& edges, std::size_t n,
                                  std::size_t disabled) const {
  std::vector<double> alpha(n + 1, kNegInf);
  alpha[0] = 0.0;
  for (const Edge& e : edges) {
    if (e.piece == disabled) continue;
    alpha[e.end] = log_add(alpha[e.end], alpha[e.start] + logp_[e.piece]);
  }
  return alpha[n];
}

double Trainer::corpus_log_likelihood() const {
  double total = 0.0;
  for (const Word& w : words_) {
    total += w.freq * word_log_marginal(edges_of(w.text), w.text.size(), kNone);
  }
  return total;
}

void Trainer::em_step() {
  std::vector<double> expected(pieces_.size(), 0.0);
  for (const Word& w : words_) {
    const std::size_t n = w.text.size();
    const auto edges = edges_of(w.text);
    std::vector<double> alpha(n + 1, kNegInf);
    std::vector<double> beta(n + 1, kNegInf);
    alpha[0] = 0.0;
    beta[n] = 0.0;
    for (const Edge& e : edges) {
      alpha[e.end] = log_add(alpha[e.end], alpha[e.start] + logp_[e.piece]);
    }
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
      beta[it->start] = log_add(beta[it->start], beta[it->end] + logp_[it->piece]);
    }
    const double z = alpha[n];
    if (z == kNegInf) continue;
    for (const Edge& e : edges) {
      const double lp = alpha[e.start] + logp_[e.piece] + beta[e.end] - z;
      if (lp != kNegInf) expected[e.piece] += w.freq * std::exp(lp);
    }
  }
  const double total = std::accumulate(expected.begin(), expected.end(), 0.0);
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    logp_[i] = expected[i] > 0.0 ? std::log(expected[i] / total) : kNegInf;
  }
}

void Trainer::prune(std::size_t target_size) {
  const std::size_t multi = multi_char_count();
  if (pieces_.size() <= target_size || multi == 0) return;
  std::size_t budget = std::max<std::size_t>(
      1, static_cast<std::size_t>(config_.prune_fraction * static_cast<double>(multi)));
  budget = std::min({budget, pieces_.size() - target_size, multi});

  // Likelihood lost when a piece is disabled, summed over words whose text
  // contains it. Probabilities of other pieces are held fixed.
  std::vector<double> loss(pieces_.size(), 0.0);
  for (const Word& w : words_) {
    const auto edges = edges_of(w.text);
    const double z = word_log_marginal(edges, w.text.size(), kNone);
    std::vector<bool> seen(pieces_.size(), false);
    for (const Edge& e : edges) {
      if (pieces_[e.piece].size() < 2 || seen[e.piece]) continue;
      seen[e.piece] = true;
      const double without = word_log_marginal(edges, w.text.size(), e.piece);
      loss[e.piece] += without == kNegInf ? std::numeric_limits<double>::infinity()
                                          : w.freq * (z - without);
    }
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].size() > 1) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return loss[a] != loss[b] ? loss[a] < loss[b] : pieces_[a] < pieces_[b];
  });
  std::vector<bool> drop(pieces_.size(), false);
  for (std::size_t i = 0; i < budget; ++i) drop[order[i]] = true;

  std::vector<std::u32string> kept;
  std::vector<double> kept_logp;
  double mass = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (drop[i]) continue;
    kept.push_back(pieces_[i]);
    kept_logp.push_back(logp_[i]);
    mass += std::exp(logp_[i]);
  }
  const double log_mass = std::log(mass);
  for (double& lp : kept_logp) lp -= log_mass;
  pieces_ = std::move(kept);
  logp_ = std::move(kept_logp);
  rebuild_index();
}

TokenizerModel Trainer::build() const {
  std::vector<std::pair<std::u32string, double>> chosen;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    double p = std::exp(logp_[i]);
    if (pieces_[i].size() == 1) {
      chosen.emplace_back(pieces_[i], std::max(p, kCharFloor));
    } else if (p > 0.0) {
      chosen.emplace_back(pieces_[i], p);
    }
  }
  std::stable_sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) {
    if ((a.first.size() == 1) != (b.first.size() == 1)) return a.first.size() == 1;
    return a.first < b.first;
  });
  double mass = 0.0;
  for (const auto& c : chosen) mass += c.second;
  std::vector<std::u32string> vocab;
  std::vector<double> logp;
  for (auto& [text, p] : chosen) {
    vocab.push_back(text);
    logp.push_back(std::log(p / mass));
  }
  return TokenizerModel(TokenizerKind::kUnigram, alphabet_, std::move(vocab), {},
                        std::move(logp));
}

}  // namespace ohwr::unigram

namespace ohwr {

TokenizerModel train_unigram(std::span<const std::string> labels, std::size_t vocab_size,
                             const UnigramConfig& config) {
  const std::u32string alphabet = collect_alphabet(labels);
  check_training_input(labels, alphabet.size(), vocab_size);
  unigram::Trainer trainer(labels, config);
  for (;;) {
    for (int r = 0; r < config.em_rounds; ++r) trainer.em_step();
    if (trainer.size() <= vocab_size || trainer.multi_char_count() == 0) break;
    trainer.prune(vocab_size);
  }
  return trainer.build();
}

}  // namespace ohwr
