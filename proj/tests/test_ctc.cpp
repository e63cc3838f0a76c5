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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "ohwr/ctc.hpp"
#include "ohwr/error.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace ohwr;

namespace {

// One-hot-ish logits whose argmax follows `path`.
LogitMatrix path_logits(const std::vector<int>& path, std::size_t classes) {
  LogitMatrix m(path.size(), classes);
  for (std::size_t t = 0; t < path.size(); ++t) m.at(t, static_cast<std::size_t>(path[t])) = 5.0;
  return m;
}

LogitMatrix log_probs(const std::vector<std::vector<double>>& probs) {
  std::vector<double> values;
  for (const auto& row : probs) {
    for (double p : row) values.push_back(std::log(p));
  }
  return LogitMatrix(probs.size(), probs[0].size(), std::move(values));
}

std::vector<std::vector<double>> random_probs(std::mt19937_64& rng, std::size_t frames,
                                              std::size_t classes) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<std::vector<double>> out(frames, std::vector<double>(classes));
  for (auto& row : out) {
    double sum = 0.0;
    for (double& p : row) sum += (p = u(rng));
    for (double& p : row) p /= sum;
  }
  return out;
}

Sample sample(std::string id, std::string label, std::size_t frames) {
  Sample s;
  s.id = std::move(id);
  s.writer_id = "w";
  s.label = std::move(label);
  s.signal = Signal{1, std::vector<float>(frames, 0.0f)};
  return s;
}

}  // namespace

TEST_CASE("greedy decode collapses repeats and drops blanks") {
  CHECK(greedy_decode(path_logits({0, 1, 1, 0, 2}, 3)) == TokenSequence{1, 2});
  CHECK(greedy_decode(path_logits({0, 0, 0}, 3)).empty());
  CHECK(greedy_decode(path_logits({1, 0, 1}, 3)) == TokenSequence{1, 1});
  // Ties go to the lowest index.
  CHECK(greedy_decode(LogitMatrix(2, 3)).empty());
  CHECK(greedy_decode(LogitMatrix(1, 3, {0.0, 1.0, 1.0})) == TokenSequence{1});
}

TEST_CASE("greedy decode: no blanks, no adjacent repeats, shift invariant") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t frames = synth::uniform(rng, 1, 20);
    const std::size_t classes = synth::uniform(rng, 2, 6);
    std::vector<double> values(frames * classes);
    for (double& v : values) v = noise(rng);
    const LogitMatrix m(frames, classes, values);
    const TokenSequence out = greedy_decode(m);
    std::vector<int> path;
    for (std::size_t t = 0; t < frames; ++t) {
      const auto row = m.row(t);
      path.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
    }
    const std::vector<int> expected = oracle::collapse(path);
    CHECK(TokenSequence(expected.begin(), expected.end()) == out);
    for (TokenId id : out) CHECK(id != kBlankId);
    LogitMatrix shifted = m;
    for (std::size_t t = 0; t < frames; ++t) {
      const double c = std::ldexp(static_cast<double>(rng() % 64), -2) - 8.0;
      for (std::size_t k = 0; k < classes; ++k) shifted.at(t, k) += c;
    }
    CHECK(greedy_decode(shifted) == out);
    CHECK(greedy_decode(m.log_softmax()) == out);
  }
}

TEST_CASE("forward nll: single-frame and two-frame examples") {
  const TokenSequence a{1};
  const auto one = ctc_forward_nll(log_probs({{0.3, 0.6, 0.1}}), a);
  CHECK(one.feasible);
  CHECK(one.nll == doctest::Approx(-std::log(0.6)).epsilon(1e-12));

  const double third = 1.0 / 3.0;
  const auto two = ctc_forward_nll(log_probs({{third, third, third}, {third, third, third}}), a);
  CHECK(two.nll == doctest::Approx(1.0986122886681098).epsilon(1e-12));
}

TEST_CASE("forward nll: repeated target against the alignment oracle") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto probs = random_probs(rng, 4, 3);
    const auto sums = oracle::alignment_sums(probs);
    const auto loss = ctc_forward_nll(log_probs(probs), TokenSequence{1, 1});
    REQUIRE(loss.feasible);
    CHECK(std::abs(loss.nll + std::log(sums.at({1, 1}))) <= 1e-9);
  }
}

TEST_CASE("forward nll: infeasible targets are +inf and flagged") {
  std::mt19937_64 rng(1);
  const auto probs = random_probs(rng, 2, 3);
  const auto loss = ctc_forward_nll(log_probs(probs), TokenSequence{1, 1});
  CHECK_FALSE(loss.feasible);
  CHECK(std::isinf(loss.nll));
  CHECK(loss.nll > 0);
}

TEST_CASE("forward nll: rejects bad inputs") {
  const LogitMatrix uniform = log_probs({{0.5, 0.5}});
  CHECK_THROWS_AS(ctc_forward_nll(uniform, TokenSequence{0}), InvalidArgument);
  CHECK_THROWS_AS(ctc_forward_nll(uniform, TokenSequence{2}), InvalidArgument);
  CHECK_THROWS_AS(ctc_forward_nll(LogitMatrix(1, 2, {0.0, 0.0}), TokenSequence{1}), InvalidArgument);
  CHECK_THROWS_AS(LogitMatrix(0, 2, {}), InvalidArgument);
  CHECK_THROWS_AS(LogitMatrix(1, 2, {0.0, NAN}), InvalidArgument);
  CHECK_THROWS_AS(LogitMatrix(1, 2, {0.0}), DimensionMismatch);
}

TEST_CASE("forward nll matches exhaustive enumeration on a small grid") {
  std::mt19937_64 rng(21);
  for (std::size_t frames = 1; frames <= 5; ++frames) {
    for (std::size_t classes = 2; classes <= 4; ++classes) {
      const auto probs = random_probs(rng, frames, classes);
      const auto sums = oracle::alignment_sums(probs);
      const LogitMatrix lp = log_probs(probs);
      for (std::size_t len = 0; len <= 4; ++len) {
        TokenSequence target;
        for (std::size_t i = 0; i < len; ++i) {
          target.push_back(static_cast<TokenId>(1 + rng() % (classes - 1)));
        }
        const std::vector<int> key(target.begin(), target.end());
        const auto loss = ctc_forward_nll(lp, target);
        const auto it = sums.find(key);
        if (it == sums.end()) {
          CHECK_FALSE(loss.feasible);
        } else {
          REQUIRE(loss.feasible);
          CHECK(std::abs(loss.nll + std::log(it->second)) <= 1e-9);
          CHECK(std::exp(-loss.nll) <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("feasibility predicate examples and brute force agreement") {
  CHECK(ctc_feasible(3, TokenSequence{1, 2, 3}));
  CHECK_FALSE(ctc_feasible(2, TokenSequence{1, 1}));
  CHECK(ctc_feasible(0, TokenSequence{}));
  CHECK(ctc_min_frames(TokenSequence{1, 1, 2, 2, 2}) == 8);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t frames = synth::uniform(rng, 0, 12);
    const std::size_t len = synth::uniform(rng, 0, 6);
    std::vector<int> target;
    for (std::size_t i = 0; i < len; ++i) target.push_back(1 + static_cast<int>(rng() % 3));
    const TokenSequence ids(target.begin(), target.end());
    CHECK(ctc_feasible(frames, ids) == oracle::alignment_exists(frames, target));
  }
}

TEST_CASE("feasibility report: trivial fixtures") {
  std::vector<Sample> samples{sample("a", "abc", 10), sample("b", "cab", 4), sample("c", "bca", 3)};
  const Dataset ds(samples);
  FoldSplit fold;
  fold.train_ids = {"a", "b", "c"};
  const auto labels = labels_of(ds, fold.train_ids);
  const auto chars = train_char(labels);

  const auto ok = feasibility_report(fold, ds, chars, 1);
  CHECK(ok.samples == 3);
  CHECK(ok.fraction == 0.0);
  CHECK(ok.mean_token_length == 1.0);

  std::vector<Sample> tiny{sample("a", "abc", 2), sample("b", "bca", 2)};
  const Dataset short_ds(tiny);
  FoldSplit both;
  both.train_ids = {"a", "b"};
  CHECK(feasibility_report(both, short_ds, chars, 1).fraction == 1.0);

  // Subsampling by 4 leaves 2, 1 and 0 frames.
  CHECK(feasibility_report(fold, ds, chars, 4).infeasible == 3);
  CHECK_THROWS_AS(feasibility_report(fold, ds, chars, 0), InvalidArgument);
}

TEST_CASE("feasibility report: fraction falls as BPE tokens lengthen") {
  std::mt19937_64 rng(33);
  std::vector<Sample> samples;
  const auto words = synth::random_corpus(rng, "abcdef", 40, 10);
  for (std::size_t i = 0; i < 400; ++i) {
    const std::string& w = words[i % words.size()];
    samples.push_back(sample("s" + std::to_string(i), w, synth::uniform(rng, 1, 12)));
  }
  const Dataset ds(samples);
  FoldSplit fold;
  for (const auto& s : ds.samples()) fold.train_ids.push_back(s.id);
  const auto labels = labels_of(ds, fold.train_ids);

  std::vector<FeasibilityReport> sweep;
  for (std::size_t v : {6u, 10u, 20u, 40u, 80u, 160u}) {
    sweep.push_back(feasibility_report(fold, ds, train_bpe(labels, v), 1));
  }
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    CHECK(sweep[i].mean_token_length >= sweep[i - 1].mean_token_length);
    CHECK(sweep[i].fraction <= sweep[i - 1].fraction);
  }
  CHECK(sweep.back().fraction < sweep.front().fraction);
}

TEST_CASE("logit archive round-trips through files") {
  const auto dir = std::filesystem::temp_directory_path() / "ohwr_test_logits";
  std::filesystem::remove_all(dir);
  std::mt19937_64 rng(4);
  std::vector<LogitMatrix> written;
  {
    LogitArchiveWriter writer(dir / "logits.bin", dir / "logits.jsonl");
    for (int i = 0; i < 5; ++i) {
      const std::size_t frames = synth::uniform(rng, 1, 9);
      std::vector<double> values(frames * 4);
      for (double& v : values) v = static_cast<float>(static_cast<double>(rng() % 1000) / 7.0);
      written.emplace_back(frames, 4, values);
      writer.add("id" + std::to_string(i), written.back());
    }
  }
  const LogitArchive archive(dir / "logits.bin", dir / "logits.jsonl");
  CHECK(archive.ids().size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(archive.read("id" + std::to_string(i)) == written[i]);
  CHECK_FALSE(archive.contains("nope"));
  CHECK_THROWS_AS(archive.read("nope"), InputError);

  std::string record = encode_logit_record(written[0]);
  CHECK(record.substr(0, 4) == "CTCL");
  CHECK(decode_logit_record(record, 0) == written[0]);
  record[0] = 'X';
  CHECK_THROWS_AS(decode_logit_record(record, 0), InputError);
  CHECK_THROWS_AS(decode_logit_record(record.substr(0, 10), 0), InputError);
  std::filesystem::remove_all(dir);
}
