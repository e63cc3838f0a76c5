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

#include "ohwr/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "ohwr/error.hpp"
#include "ohwr/hash.hpp"
#include "ohwr/utf8.hpp"

namespace ohwr {

void Signal::append(const Signal& other) {
  if (other.values.empty()) return;
  if (values.empty()) {
    *this = other;
    return;
  }
  if (other.channels != channels) {
    throw InvalidArgument("cannot join signals with " + std::to_string(channels) + " and " +
                          std::to_string(other.channels) + " channels");
  }
  values.insert(values.end(), other.values.begin(), other.values.end());
}

void validate_sample(const Sample& sample) {
  if (sample.id.empty()) throw InputError("sample id is empty");
  const std::u32string label = utf8::decode(sample.label);
  if (label.empty()) throw InputError("sample '" + sample.id + "' has an empty label");
  for (char32_t cp : label) {
    if (utf8::is_control(cp)) {
      throw InputError("sample '" + sample.id + "' label contains control character " +
                       utf8::describe(cp));
    }
  }
  if (sample.signal.channels == 0 || sample.signal.values.empty()) {
    throw InputError("sample '" + sample.id + "' has an empty signal");
  }
  if (sample.signal.values.size() % sample.signal.channels != 0) {
    throw InputError("sample '" + sample.id + "' signal is not a whole number of frames");
  }
  for (float v : sample.signal.values) {
    if (!std::isfinite(v)) {
      throw InputError("sample '" + sample.id + "' signal contains a non-finite value");
    }
  }
}

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
  std::set<char32_t> chars;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    validate_sample(s);
    if (i == 0) channel_count_ = s.signal.channels;
    if (s.signal.channels != channel_count_) {
      throw InputError("sample '" + s.id + "' has " + std::to_string(s.signal.channels) +
                       " channels, expected " + std::to_string(channel_count_));
    }
    if (!index_.emplace(s.id, i).second) {
      throw InputError("duplicate sample id '" + s.id + "'");
    }
    for (char32_t cp : utf8::decode(s.label)) chars.insert(cp);
  }
  alphabet_.assign(chars.begin(), chars.end());
}

const Sample& Dataset::at(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InvalidArgument("unknown sample id '" + std::string(id) + "'");
  return samples_[it->second];
}

bool Dataset::contains(std::string_view id) const { return index_.find(id) != index_.end(); }

std::string_view to_string(Protocol protocol) {
  return protocol == Protocol::kWriterDependent ? "wd" : "wi";
}

Protocol parse_protocol(std::string_view text) {
  if (text == "wd" || text == "WD") return Protocol::kWriterDependent;
  if (text == "wi" || text == "WI") return Protocol::kWriterIndependent;
  throw InvalidArgument("unknown protocol '" + std::string(text) + "' (expected wd or wi)");
}

std::vector<std::vector<std::string>> assign_groups(std::vector<std::string> group_keys,
                                                    std::size_t k, std::uint64_t seed) {
  if (k == 0) throw InvalidArgument("fold count must be positive");
  std::sort(group_keys.begin(), group_keys.end());
  group_keys.erase(std::unique(group_keys.begin(), group_keys.end()), group_keys.end());
  if (group_keys.size() < k) {
    throw InvalidArgument("cannot build " + std::to_string(k) + " folds from " +
                          std::to_string(group_keys.size()) + " distinct groups");
  }

  struct Entry {
    std::uint64_t hash;
    const std::string* key;
  };
  std::vector<std::vector<Entry>> folds(k);
  for (const std::string& key : group_keys) {
    const std::uint64_t h = seeded_hash(key, seed);
    folds[h % k].push_back({h, &key});
  }

  // Move one group at a time from the largest fold to the smallest. The
  // moved group is the one with the largest hash (key breaks ties).
  auto later = [](const Entry& a, const Entry& b) {
    return a.hash != b.hash ? a.hash < b.hash : *a.key < *b.key;
  };
  for (;;) {
    std::size_t largest = 0;
    std::size_t smallest = 0;
    for (std::size_t f = 1; f < k; ++f) {
      if (folds[f].size() > folds[largest].size()) largest = f;
      if (folds[f].size() < folds[smallest].size()) smallest = f;
    }
    if (folds[largest].size() - folds[smallest].size() <= 1) break;
    auto& from = folds[largest];
    auto it = std::max_element(from.begin(), from.end(), later);
    folds[smallest].push_back(*it);
    from.erase(it);
  }

  std::vector<std::vector<std::string>> out(k);
  for (std::size_t f = 0; f < k; ++f) {
    for (const Entry& e : folds[f]) out[f].push_back(*e.key);
    std::sort(out[f].begin(), out[f].end());
  }
  return out;
}

std::vector<FoldSplit> split_folds(const Dataset& dataset, Protocol protocol, std::size_t k,
                                   std::uint64_t seed) {
  auto group_of = [protocol](const Sample& s) -> const std::string& {
    return protocol == Protocol::kWriterIndependent ? s.writer_id : s.label;
  };
  std::vector<std::string> keys;
  keys.reserve(dataset.size());
  for (const Sample& s : dataset.samples()) keys.push_back(group_of(s));

  const auto groups = assign_groups(std::move(keys), k, seed);
  std::unordered_map<std::string, std::size_t> fold_of;
  for (std::size_t f = 0; f < groups.size(); ++f) {
    for (const std::string& g : groups[f]) fold_of.emplace(g, f);
  }

  std::vector<FoldSplit> splits(k);
  for (std::size_t f = 0; f < k; ++f) {
    splits[f].fold_index = f;
    splits[f].protocol = protocol;
  }
  for (const Sample& s : dataset.samples()) {
    const std::size_t home = fold_of.at(group_of(s));
    for (std::size_t f = 0; f < k; ++f) {
      (f == home ? splits[f].val_ids : splits[f].train_ids).push_back(s.id);
    }
  }
  return splits;
}

std::vector<const Sample*> select_samples(const Dataset& dataset,
                                          const std::vector<std::string>& ids) {
  std::vector<const Sample*> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) out.push_back(&dataset.at(id));
  return out;
}

std::vector<std::string> labels_of(const Dataset& dataset, const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) out.push_back(dataset.at(id).label);
  return out;
}

CharDistribution char_distribution(std::span<const std::string> labels) {
  CharDistribution dist;
  std::size_t total = 0;
  for (const std::string& label : labels) {
    for (char32_t cp : utf8::decode(label)) {
      ++dist[cp].count;
      ++total;
    }
  }
  for (auto& [cp, stat] : dist) {
    stat.frequency = static_cast<double>(stat.count) / static_cast<double>(total);
  }
  return dist;
}

Divergence distribution_divergence(const CharDistribution& train, const CharDistribution& val) {
  Divergence out;
  std::set<char32_t> support;
  for (const auto& [cp, stat] : train) support.insert(cp);
  for (const auto& [cp, stat] : val) support.insert(cp);

  auto freq = [](const CharDistribution& d, char32_t cp) {
    auto it = d.find(cp);
    return it == d.end() ? 0.0 : it->second.frequency;
  };
  auto present = [](const CharDistribution& d, char32_t cp) {
    auto it = d.find(cp);
    return it != d.end() && (it->second.count > 0 || it->second.frequency > 0.0);
  };

  double sum = 0.0;
  for (char32_t cp : support) {
    sum += std::abs(freq(train, cp) - freq(val, cp));
    if (present(train, cp) && !present(val, cp)) out.missing_in_val.push_back(cp);
    if (present(val, cp) && !present(train, cp)) out.missing_in_train.push_back(cp);
  }
  out.total_variation = std::clamp(0.5 * sum, 0.0, 1.0);
  return out;
}

}  // namespace ohwr
