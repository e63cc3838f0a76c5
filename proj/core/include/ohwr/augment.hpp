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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ohwr/corpus.hpp"
#include "ohwr/tokenizer.hpp"

namespace ohwr {

struct AugmentPlan {
  std::size_t n_concat = 0;
  std::uint64_t seed = 0;
  std::string separator;
  // Draw with replacement when a writer has fewer than n_concat other
  // samples. A writer with no other samples then reuses the base sample.
  bool with_replacement_fallback = true;
};

struct AugmentedSample {
  std::vector<std::string> source_ids;  // base first
  std::string writer_id;
  std::string label;
  std::optional<TokenSequence> token_ids;
  Signal signal;

  std::size_t frame_count() const { return signal.frame_count(); }
  // Sample id used in dumps: source ids joined with '+'.
  std::string id() const;

  friend bool operator==(const AugmentedSample&, const AugmentedSample&) = default;
};

// Applied to the concatenated signal, e.g. the recognizer's own
// preprocessing. The augmentation itself never filters or normalizes.
using SignalHook = std::function<void(Signal&)>;

// Picks for `base` under (plan.seed, epoch, base.id): pool samples from the
// same writer other than base, drawn uniformly without replacement.
std::vector<const Sample*> select_partners(const Sample& base, std::span<const Sample* const> pool,
                                           const AugmentPlan& plan, std::uint64_t epoch);

// Concatenates base with its partners. When a model is given, token_ids is
// the concatenation of each piece's own encoding (and the separator's),
// never the encoding of the joined label.
AugmentedSample concat_augment(const Sample& base, std::span<const Sample* const> pool,
                               const AugmentPlan& plan, const TokenizerModel* model,
                               std::uint64_t epoch = 0, const SignalHook& hook = {});

// Yields one augmented sample per training sample of a fold, in dataset
// order. The pool is the fold's training side.
class AugmentEpoch {
 public:
  AugmentEpoch(const FoldSplit& fold, const Dataset& dataset, AugmentPlan plan,
               const TokenizerModel* model, std::uint64_t epoch, SignalHook hook = {});

  std::optional<AugmentedSample> next();
  std::size_t size() const { return train_.size(); }

 private:
  std::vector<const Sample*> train_;
  AugmentPlan plan_;
  const TokenizerModel* model_;
  std::uint64_t epoch_;
  SignalHook hook_;
  std::size_t cursor_ = 0;
};

std::vector<AugmentedSample> augment_epoch(const FoldSplit& fold, const Dataset& dataset,
                                           const AugmentPlan& plan, const TokenizerModel* model,
                                           std::uint64_t epoch);

// Dataset record plus "sources" and, when present, "token_ids".
std::string serialize_augmented(const AugmentedSample& sample);

// Character-throughput multiplier of n_concat extra samples: n_concat + 1
// epochs of plain training see as many characters.
double equivalent_epochs(std::size_t n_concat);

}  // namespace ohwr
