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
#include <vector>

#include "ohwr/corpus.hpp"
#include "ohwr/tokenizer.hpp"

namespace ohwr {

// T frames by (V + 1) classes, row-major. Column 0 is the CTC blank and
// column i is token id i.
class LogitMatrix {
 public:
  LogitMatrix(std::size_t frames, std::size_t classes, std::vector<double> values);
  LogitMatrix(std::size_t frames, std::size_t classes);

  std::size_t frames() const { return frames_; }
  std::size_t classes() const { return classes_; }
  std::span<const double> row(std::size_t t) const {
    return std::span<const double>(values_).subspan(t * classes_, classes_);
  }
  double& at(std::size_t t, std::size_t c) { return values_[t * classes_ + c]; }
  double at(std::size_t t, std::size_t c) const { return values_[t * classes_ + c]; }
  const std::vector<double>& values() const { return values_; }

  // Row-wise log-softmax.
  LogitMatrix log_softmax() const;

  friend bool operator==(const LogitMatrix&, const LogitMatrix&) = default;

 private:
  std::size_t frames_;
  std::size_t classes_;
  std::vector<double> values_;
};

// Best path: per-frame argmax (lowest index on ties), repeats collapsed,
// blanks dropped.
TokenSequence greedy_decode(const LogitMatrix& logits);

// Minimum frames for a valid alignment is L + R, where R counts adjacent
// equal ids (each needs a blank between them).
std::size_t ctc_min_frames(std::span<const TokenId> target);
bool ctc_feasible(std::size_t frames, std::span<const TokenId> target);

struct CtcLoss {
  double nll;     // +infinity when infeasible
  bool feasible;
};

// -log of the total probability of all alignments of target, via the alpha
// recursion over the blank-augmented target in log space. Rows must be
// log-distributions (logsumexp within 1e-6 of 0). Target ids must be in
// 1..classes-1. Throws InvalidArgument otherwise.
CtcLoss ctc_forward_nll(const LogitMatrix& logprobs, std::span<const TokenId> target);

struct FeasibilityReport {
  std::size_t samples = 0;
  std::size_t infeasible = 0;
  double fraction = 0.0;           // infeasible / samples, 0 when empty
  double mean_token_length = 0.0;  // characters per emitted token
};

// Share of training samples whose encoded label cannot be aligned in
// frame_count / frame_subsample frames (integer division).
FeasibilityReport feasibility_report(const FoldSplit& fold, const Dataset& dataset,
                                     const TokenizerModel& model, std::size_t frame_subsample);

// Binary logit archive: a sequence of little-endian records, each
//   "CTCL" | u32 version | u32 T | u32 V+1 | T*(V+1) float32 row-major
// plus a JSONL index of {"id": str, "offset": byte offset of the record}.
inline constexpr std::uint32_t kLogitFileVersion = 1;

class LogitArchiveWriter {
 public:
  LogitArchiveWriter(const std::filesystem::path& data_path,
                     const std::filesystem::path& index_path);

  void add(const std::string& id, const LogitMatrix& logits);
  void close();
  ~LogitArchiveWriter();

  LogitArchiveWriter(const LogitArchiveWriter&) = delete;
  LogitArchiveWriter& operator=(const LogitArchiveWriter&) = delete;

 private:
  std::filesystem::path data_path_;
  std::filesystem::path index_path_;
  std::string data_;
  std::string index_;
  bool closed_ = false;
};

class LogitArchive {
 public:
  LogitArchive(const std::filesystem::path& data_path, const std::filesystem::path& index_path);

  bool contains(const std::string& id) const;
  // Throws InputError for unknown ids or corrupt records.
  LogitMatrix read(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  std::string data_;
  std::vector<std::string> order_;
  std::map<std::string, std::uint64_t> offsets_;
};

std::string encode_logit_record(const LogitMatrix& logits);
// Decodes the record starting at `offset`. Values are widened to double.
LogitMatrix decode_logit_record(std::string_view data, std::uint64_t offset);

}  // namespace ohwr
