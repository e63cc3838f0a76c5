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

#include "ohwr/augment.hpp"

#include <json.hpp>

#include "ohwr/error.hpp"
#include "ohwr/hash.hpp"
#include "ohwr/io.hpp"

namespace ohwr {

std::string AugmentedSample::id() const {
  std::string out;
  for (std::size_t i = 0; i < source_ids.size(); ++i) {
    if (i > 0) out += '+';
    out += source_ids[i];
  }
  return out;
}

std::vector<const Sample*> select_partners(const Sample& base, std::span<const Sample* const> pool,
                                           const AugmentPlan& plan, std::uint64_t epoch) {
  if (plan.n_concat == 0) return {};
  std::vector<const Sample*> eligible;
  for (const Sample* s : pool) {
    if (s->writer_id == base.writer_id && s->id != base.id) eligible.push_back(s);
  }
  if (eligible.empty() && !plan.with_replacement_fallback) {
    throw InvalidArgument("writer '" + base.writer_id + "' has no other training samples to join with '" +
                          base.id + "'");
  }

  DeterministicRng rng(hash_combine(hash_combine(plan.seed, epoch), fnv1a64(base.id)));
  std::vector<const Sample*> picks;
  picks.reserve(plan.n_concat);
  if (eligible.empty()) {
    picks.assign(plan.n_concat, &base);
    return picks;
  }
  // Partial Fisher-Yates: the first draws are without replacement.
  const std::size_t distinct = std::min(plan.n_concat, eligible.size());
  for (std::size_t i = 0; i < distinct; ++i) {
    const std::size_t j = i + rng.below(eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
    picks.push_back(eligible[i]);
  }
  if (picks.size() < plan.n_concat && !plan.with_replacement_fallback) {
    throw InvalidArgument("writer '" + base.writer_id + "' has only " +
                          std::to_string(eligible.size()) + " other training samples, " +
                          std::to_string(plan.n_concat) + " requested");
  }
  while (picks.size() < plan.n_concat) picks.push_back(eligible[rng.below(eligible.size())]);
  return picks;
}

AugmentedSample concat_augment(const Sample& base, std::span<const Sample* const> pool,
                               const AugmentPlan& plan, const TokenizerModel* model,
                               std::uint64_t epoch, const SignalHook& hook) {
  const auto partners = select_partners(base, pool, plan, epoch);

  AugmentedSample out;
  out.writer_id = base.writer_id;
  out.source_ids.push_back(base.id);
  out.label = base.label;
  out.signal = base.signal;
  TokenSequence tokens;
  if (model) tokens = encode(*model, base.label);
  const TokenSequence separator_tokens =
      model && !plan.separator.empty() ? encode(*model, plan.separator) : TokenSequence{};

  for (const Sample* p : partners) {
    out.source_ids.push_back(p->id);
    out.label += plan.separator;
    out.label += p->label;
    out.signal.append(p->signal);
    if (model) {
      tokens.insert(tokens.end(), separator_tokens.begin(), separator_tokens.end());
      const TokenSequence piece = encode(*model, p->label);
      tokens.insert(tokens.end(), piece.begin(), piece.end());
    }
  }
  if (model) out.token_ids = std::move(tokens);
  if (hook) hook(out.signal);
  return out;
}

AugmentEpoch::AugmentEpoch(const FoldSplit& fold, const Dataset& dataset, AugmentPlan plan,
                           const TokenizerModel* model, std::uint64_t epoch, SignalHook hook)
    : train_(select_samples(dataset, fold.train_ids)),
      plan_(std::move(plan)),
      model_(model),
      epoch_(epoch),
      hook_(std::move(hook)) {}

std::optional<AugmentedSample> AugmentEpoch::next() {
  if (cursor_ >= train_.size()) return std::nullopt;
  const Sample& base = *train_[cursor_++];
  return concat_augment(base, train_, plan_, model_, epoch_, hook_);
}

std::vector<AugmentedSample> augment_epoch(const FoldSplit& fold, const Dataset& dataset,
                                           const AugmentPlan& plan, const TokenizerModel* model,
                                           std::uint64_t epoch) {
  AugmentEpoch stream(fold, dataset, plan, model, epoch);
  std::vector<AugmentedSample> out;
  out.reserve(stream.size());
  while (auto s = stream.next()) out.push_back(std::move(*s));
  return out;
}

std::string serialize_augmented(const AugmentedSample& sample) {
  Sample record{sample.id(), sample.writer_id, sample.label, sample.signal};
  std::string out = "{" + serialize_sample_fields(record);
  out += ",\"sources\":" + nlohmann::json(sample.source_ids).dump();
  if (sample.token_ids) out += ",\"token_ids\":" + nlohmann::json(*sample.token_ids).dump();
  out += "}";
  return out;
}

double equivalent_epochs(std::size_t n_concat) { return static_cast<double>(n_concat) + 1.0; }

}  // namespace ohwr
