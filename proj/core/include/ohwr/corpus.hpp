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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ohwr {

// Row-major multichannel time series: frame t occupies
// values[t * channels, (t + 1) * channels).
struct Signal {
  std::size_t channels = 0;
  std::vector<float> values;

  std::size_t frame_count() const { return channels == 0 ? 0 : values.size() / channels; }
  std::span<const float> frame(std::size_t t) const {
    return std::span<const float>(values).subspan(t * channels, channels);
  }
  void append(const Signal& other);

  friend bool operator==(const Signal&, const Signal&) = default;
};

struct Sample {
  std::string id;
  std::string writer_id;
  std::string label;  // UTF-8
  Signal signal;

  std::size_t frame_count() const { return signal.frame_count(); }

  friend bool operator==(const Sample&, const Sample&) = default;
};

class Dataset {
 public:
  Dataset() = default;

  // Validates every sample (see validate_sample) and id uniqueness. The
  // channel count is taken from the first sample; an empty dataset has 0.
  explicit Dataset(std::vector<Sample> samples);

  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  std::size_t channel_count() const { return channel_count_; }
  // Every code point occurring in a label, sorted ascending.
  const std::u32string& alphabet() const { return alphabet_; }

  // Throws InvalidArgument when absent.
  const Sample& at(std::string_view id) const;
  bool contains(std::string_view id) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.samples_ == b.samples_ && a.channel_count_ == b.channel_count_;
  }

 private:
  std::vector<Sample> samples_;
  std::size_t channel_count_ = 0;
  std::u32string alphabet_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Checks the per-sample invariants: non-empty id and control-free, non-empty
// label; at least one frame; finite values; values.size() divisible by
// channels. Throws InputError describing the first violation.
void validate_sample(const Sample& sample);

// JSON Lines, one record per sample:
//   {"id": str, "writer": str, "label": str, "signal": [[f, ...], ...]}
// Blank lines are skipped. Errors carry the 1-based line number.
Dataset load_dataset(const std::filesystem::path& path);
Dataset parse_dataset(std::string_view jsonl);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
std::string serialize_dataset(const Dataset& dataset);

enum class Protocol { kWriterDependent, kWriterIndependent };

std::string_view to_string(Protocol protocol);
// Accepts "wd" / "wi".
Protocol parse_protocol(std::string_view text);

struct FoldSplit {
  std::size_t fold_index = 0;
  Protocol protocol = Protocol::kWriterIndependent;
  // Sample ids in dataset order.
  std::vector<std::string> train_ids;
  std::vector<std::string> val_ids;

  friend bool operator==(const FoldSplit&, const FoldSplit&) = default;
};

// Grouped k-fold split. Groups are writers (WI) or label strings (WD); each
// group lands in exactly one validation fold. Assignment hashes the sorted
// group keys with the seed and then rebalances until fold sizes (in groups)
// differ by at most one, so it is independent of sample order.
std::vector<FoldSplit> split_folds(const Dataset& dataset, Protocol protocol, std::size_t k,
                                   std::uint64_t seed);

// Groups that go to each validation fold, exposed for diagnostics/tests.
std::vector<std::vector<std::string>> assign_groups(std::vector<std::string> group_keys,
                                                    std::size_t k, std::uint64_t seed);

// {"protocol": "wd"|"wi", "k": int, "seed": int, "folds": [{"train": [...], "val": [...]}]}
std::string serialize_folds(const std::vector<FoldSplit>& folds, std::uint64_t seed);
std::vector<FoldSplit> parse_folds(std::string_view json);

// Samples of one side of a split, in dataset order.
std::vector<const Sample*> select_samples(const Dataset& dataset,
                                          const std::vector<std::string>& ids);
std::vector<std::string> labels_of(const Dataset& dataset, const std::vector<std::string>& ids);

struct CharStat {
  std::size_t count = 0;
  double frequency = 0.0;

  friend bool operator==(const CharStat&, const CharStat&) = default;
};

using CharDistribution = std::map<char32_t, CharStat>;

CharDistribution char_distribution(std::span<const std::string> labels);

struct Divergence {
  std::u32string missing_in_val;    // present in train, absent from validation
  std::u32string missing_in_train;  // present in validation, absent from train
  double total_variation = 0.0;     // in [0, 1]
};

Divergence distribution_divergence(const CharDistribution& train, const CharDistribution& val);

}  // namespace ohwr
