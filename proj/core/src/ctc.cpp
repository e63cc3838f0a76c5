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

#include "ohwr/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ohwr/error.hpp"
#include "ohwr/utf8.hpp"

namespace ohwr {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_sum(std::span<const double> row) {
  const double hi = *std::max_element(row.begin(), row.end());
  double sum = 0.0;
  for (double v : row) sum += std::exp(v - hi);
  return hi + std::log(sum);
}

}  // namespace

LogitMatrix::LogitMatrix(std::size_t frames, std::size_t classes, std::vector<double> values)
    : frames_(frames), classes_(classes), values_(std::move(values)) {
  if (frames_ == 0) throw InvalidArgument("logit matrix needs at least one frame");
  if (classes_ == 0) throw InvalidArgument("logit matrix needs at least one class");
  if (values_.size() != frames_ * classes_) {
    throw DimensionMismatch("logit matrix has " + std::to_string(values_.size()) +
                            " values, expected " + std::to_string(frames_ * classes_));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("logit matrix contains a non-finite value");
  }
}

LogitMatrix::LogitMatrix(std::size_t frames, std::size_t classes)
    : LogitMatrix(frames, classes, std::vector<double>(frames * classes, 0.0)) {}

LogitMatrix LogitMatrix::log_softmax() const {
  std::vector<double> out(values_.size());
  for (std::size_t t = 0; t < frames_; ++t) {
    const auto r = row(t);
    const double z = log_sum(r);
    for (std::size_t c = 0; c < classes_; ++c) out[t * classes_ + c] = r[c] - z;
  }
  return LogitMatrix(frames_, classes_, std::move(out));
}

TokenSequence greedy_decode(const LogitMatrix& logits) {
  TokenSequence out;
  TokenId previous = kBlankId;
  for (std::size_t t = 0; t < logits.frames(); ++t) {
    const auto r = logits.row(t);
    // max_element returns the first maximum, i.e. the lowest index.
    const auto best = static_cast<TokenId>(std::max_element(r.begin(), r.end()) - r.begin());
    if (best != kBlankId && best != previous) out.push_back(best);
    previous = best;
  }
  return out;
}

std::size_t ctc_min_frames(std::span<const TokenId> target) {
  std::size_t repeats = 0;
  for (std::size_t i = 1; i < target.size(); ++i) {
    if (target[i] == target[i - 1]) ++repeats;
  }
  return target.size() + repeats;
}

bool ctc_feasible(std::size_t frames, std::span<const TokenId> target) {
  return frames >= ctc_min_frames(target);
}

CtcLoss ctc_forward_nll(const LogitMatrix& logprobs, std::span<const TokenId> target) {
  for (TokenId id : target) {
    if (id < 1 || static_cast<std::size_t>(id) >= logprobs.classes()) {
      throw InvalidArgument("CTC target id " + std::to_string(id) + " outside 1.." +
                            std::to_string(logprobs.classes() - 1));
    }
  }
  for (std::size_t t = 0; t < logprobs.frames(); ++t) {
    if (std::abs(log_sum(logprobs.row(t))) > 1e-6) {
      throw InvalidArgument("frame " + std::to_string(t) + " is not a log-distribution");
    }
  }
  if (!ctc_feasible(logprobs.frames(), target)) {
    return {std::numeric_limits<double>::infinity(), false};
  }

  // Blank-augmented target: blank, l1, blank, l2, ..., lL, blank.
  std::vector<TokenId> ext(2 * target.size() + 1, kBlankId);
  for (std::size_t i = 0; i < target.size(); ++i) ext[2 * i + 1] = target[i];
  const std::size_t states = ext.size();

  std::vector<double> alpha(states, kNegInf);
  std::vector<double> next(states, kNegInf);
  alpha[0] = logprobs.at(0, kBlankId);
  if (states > 1) alpha[1] = logprobs.at(0, static_cast<std::size_t>(ext[1]));

  for (std::size_t t = 1; t < logprobs.frames(); ++t) {
    for (std::size_t s = 0; s < states; ++s) {
      double acc = alpha[s];
      if (s >= 1) acc = log_add(acc, alpha[s - 1]);
      if (s >= 2 && ext[s] != kBlankId && ext[s] != ext[s - 2]) acc = log_add(acc, alpha[s - 2]);
      next[s] = acc == kNegInf ? kNegInf : acc + logprobs.at(t, static_cast<std::size_t>(ext[s]));
    }
    std::swap(alpha, next);
  }

  double total = alpha[states - 1];
  if (states > 1) total = log_add(total, alpha[states - 2]);
  if (total == kNegInf) return {std::numeric_limits<double>::infinity(), true};
  return {-total, true};
}

FeasibilityReport feasibility_report(const FoldSplit& fold, const Dataset& dataset,
                                     const TokenizerModel& model, std::size_t frame_subsample) {
  if (frame_subsample < 1) throw InvalidArgument("frame_subsample must be >= 1");
  FeasibilityReport report;
  std::size_t chars = 0;
  std::size_t tokens = 0;
  for (const Sample* s : select_samples(dataset, fold.train_ids)) {
    const TokenSequence ids = encode(model, s->label);
    chars += utf8::decode(s->label).size();
    tokens += ids.size();
    ++report.samples;
    if (!ctc_feasible(s->frame_count() / frame_subsample, ids)) ++report.infeasible;
  }
  if (report.samples > 0) {
    report.fraction = static_cast<double>(report.infeasible) / static_cast<double>(report.samples);
  }
  if (tokens > 0) report.mean_token_length = static_cast<double>(chars) / static_cast<double>(tokens);
  return report;
}

}  // namespace ohwr
