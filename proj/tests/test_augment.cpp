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

#include <json.hpp>
#include <random>
#include <set>

#include "ohwr/augment.hpp"
#include "ohwr/error.hpp"
#include "ohwr/eval.hpp"
#include "support/synth.hpp"

using namespace ohwr;

namespace {

Sample make_sample(std::string id, std::string writer, std::string label, std::size_t frames,
                   float fill = 0.0f) {
  Sample s;
  s.id = std::move(id);
  s.writer_id = std::move(writer);
  s.label = std::move(label);
  s.signal.channels = 2;
  s.signal.values.assign(frames * 2, fill);
  return s;
}

std::vector<const Sample*> pointers(const std::vector<Sample>& samples) {
  std::vector<const Sample*> out;
  for (const auto& s : samples) out.push_back(&s);
  return out;
}

}  // namespace

TEST_CASE("concat: zero extra samples is the identity") {
  const std::vector<Sample> pool{make_sample("a", "w", "abc", 10), make_sample("b", "w", "de", 7)};
  const auto ptrs = pointers(pool);
  const AugmentedSample out = concat_augment(pool[0], ptrs, AugmentPlan{}, nullptr);
  CHECK(out.source_ids == std::vector<std::string>{"a"});
  CHECK(out.label == "abc");
  CHECK(out.signal == pool[0].signal);
  CHECK(!out.token_ids);
}

TEST_CASE("concat: frames add up and labels join in order") {
  const std::vector<Sample> pool{make_sample("a", "w", "abc", 10, 1.0f),
                                 make_sample("b", "w", "de", 7, 2.0f),
                                 make_sample("c", "other", "zz", 3)};
  const auto ptrs = pointers(pool);
  AugmentPlan plan;
  plan.n_concat = 1;
  const AugmentedSample out = concat_augment(pool[0], ptrs, plan, nullptr);
  CHECK(out.frame_count() == 17);
  CHECK(out.label == "abcde");
  CHECK(out.source_ids == std::vector<std::string>{"a", "b"});
  CHECK(out.signal.values.front() == 1.0f);
  CHECK(out.signal.values.back() == 2.0f);

  plan.separator = " ";
  CHECK(concat_augment(pool[0], ptrs, plan, nullptr).label == "abc de");
}

TEST_CASE("concat: tokens come from each piece, not from the joined label") {
  const std::vector<std::string> corpus{"ab", "ab", "ab", "cde", "ba"};
  const auto model = train_bigram(corpus, 6);  // a b c d e + ab
  REQUIRE(model.find(U"ab"));
  const std::vector<Sample> pool{make_sample("x", "w", "a", 3), make_sample("y", "w", "b", 3)};
  const auto ptrs = pointers(pool);
  AugmentPlan plan;
  plan.n_concat = 1;
  const AugmentedSample out = concat_augment(pool[0], ptrs, plan, &model);
  REQUIRE(out.token_ids);
  const TokenSequence piecewise{*model.find(U"a"), *model.find(U"b")};
  CHECK(*out.token_ids == piecewise);
  CHECK(encode(model, out.label) == TokenSequence{*model.find(U"ab")});
  CHECK(decode_tokens(model, *out.token_ids) == out.label);
}

TEST_CASE("concat: selection stays within the writer and excludes the base") {
  std::vector<Sample> pool;
  for (int i = 0; i < 10; ++i) {
    pool.push_back(make_sample("s" + std::to_string(i), i % 2 ? "odd" : "even", "a", 2));
  }
  const auto ptrs = pointers(pool);
  AugmentPlan plan;
  plan.n_concat = 4;
  plan.seed = 3;
  const auto out = concat_augment(pool[0], ptrs, plan, nullptr);
  REQUIRE(out.source_ids.size() == 5);
  std::set<std::string> distinct(out.source_ids.begin() + 1, out.source_ids.end());
  CHECK(distinct.size() == 4);
  CHECK(distinct.count("s0") == 0);
  for (const auto& id : out.source_ids) CHECK(std::stoi(id.substr(1)) % 2 == 0);
}

TEST_CASE("concat: small pools fall back to replacement or fail") {
  const std::vector<Sample> pool{make_sample("a", "w", "x", 2), make_sample("b", "w", "y", 2),
                                 make_sample("c", "v", "z", 2)};
  const auto ptrs = pointers(pool);
  AugmentPlan plan;
  plan.n_concat = 3;
  const auto out = concat_augment(pool[0], ptrs, plan, nullptr);
  CHECK(out.source_ids == std::vector<std::string>{"a", "b", "b", "b"});

  // A lone writer reuses its own sample.
  const auto lone = concat_augment(pool[2], ptrs, plan, nullptr);
  CHECK(lone.source_ids == std::vector<std::string>{"c", "c", "c", "c"});

  plan.with_replacement_fallback = false;
  CHECK_THROWS_AS(concat_augment(pool[0], ptrs, plan, nullptr), InvalidArgument);
  CHECK_THROWS_AS(concat_augment(pool[2], ptrs, plan, nullptr), InvalidArgument);
  plan.n_concat = 1;
  CHECK_NOTHROW(concat_augment(pool[0], ptrs, plan, nullptr));
}

TEST_CASE("concat: unknown symbols propagate from the tokenizer") {
  const std::vector<std::string> corpus{"ab"};
  const auto model = train_bigram(corpus, 2);
  const std::vector<Sample> pool{make_sample("a", "w", "ab", 2), make_sample("b", "w", "q", 2)};
  const auto ptrs = pointers(pool);
  AugmentPlan plan;
  plan.n_concat = 1;
  CHECK_THROWS_AS(concat_augment(pool[0], ptrs, plan, &model), UnknownSymbol);
}

TEST_CASE("concat: the preprocessing hook sees the joined signal") {
  const std::vector<Sample> pool{make_sample("a", "w", "x", 2, 1.0f), make_sample("b", "w", "y", 3, 1.0f)};
  const auto ptrs = pointers(pool);
  AugmentPlan plan;
  plan.n_concat = 1;
  std::size_t seen = 0;
  const auto out = concat_augment(pool[0], ptrs, plan, nullptr, 0, [&](Signal& s) {
    seen = s.frame_count();
    for (float& v : s.values) v *= 2.0f;
  });
  CHECK(seen == 5);
  CHECK(out.signal.values.front() == 2.0f);
}

TEST_CASE("epoch: deterministic per (seed, epoch), different across epochs") {
  std::mt19937_64 rng(44);
  synth::DatasetShape shape;
  shape.samples = 100;
  shape.writers = 4;
  const Dataset ds = synth::random_dataset(rng, shape);
  FoldSplit fold;
  for (const auto& s : ds.samples()) fold.train_ids.push_back(s.id);

  AugmentPlan plan;
  plan.n_concat = 2;
  plan.seed = 1234;
  const auto a = augment_epoch(fold, ds, plan, nullptr, 0);
  const auto b = augment_epoch(fold, ds, plan, nullptr, 0);
  const auto c = augment_epoch(fold, ds, plan, nullptr, 1);
  CHECK(a == b);
  REQUIRE(a.size() == 100);
  // Each writer owns ~25 samples, so a repeat of all 100 ordered pick lists
  // has probability around (1 / (24 * 23))^100.
  std::size_t differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differing += a[i].source_ids != c[i].source_ids;
  CHECK(differing > 0);
  for (const auto& s : a) {
    CHECK(s.source_ids.size() == 3);
    for (const auto& id : s.source_ids) CHECK(ds.at(id).writer_id == s.writer_id);
  }
}

TEST_CASE("epoch: the pool is the training side only") {
  std::mt19937_64 rng(45);
  synth::DatasetShape shape;
  shape.samples = 60;
  shape.writers = 3;
  const Dataset ds = synth::random_dataset(rng, shape);
  const auto folds = split_folds(ds, Protocol::kWriterDependent, 3, 5);
  AugmentPlan plan;
  plan.n_concat = 2;
  const std::set<std::string> train(folds[0].train_ids.begin(), folds[0].train_ids.end());
  AugmentEpoch stream(folds[0], ds, plan, nullptr, 0);
  std::size_t n = 0;
  while (auto s = stream.next()) {
    ++n;
    for (const auto& id : s->source_ids) CHECK(train.count(id) == 1);
  }
  CHECK(n == folds[0].train_ids.size());
}

TEST_CASE("dump record carries sources and token ids") {
  const std::vector<std::string> corpus{"ab"};
  const auto model = train_bigram(corpus, 3);
  const std::vector<Sample> pool{make_sample("a", "w", "ab", 1), make_sample("b", "w", "ba", 1)};
  const auto ptrs = pointers(pool);
  AugmentPlan plan;
  plan.n_concat = 1;
  const auto out = concat_augment(pool[0], ptrs, plan, &model);
  const auto doc = nlohmann::json::parse(serialize_augmented(out));
  CHECK(doc["id"] == "a+b");
  CHECK(doc["label"] == "abba");
  CHECK(doc["sources"] == nlohmann::json::array({"a", "b"}));
  CHECK(doc["token_ids"].get<TokenSequence>() == *out.token_ids);
  CHECK(doc["signal"].size() == 2);
}

TEST_CASE("equivalent epochs pair n extra samples with n + 1 epochs") {
  CHECK(equivalent_epochs(0) == 1.0);
  CHECK(equivalent_epochs(2) == 3.0);
  CHECK(equivalent_epochs(4) == 5.0);
}

TEST_CASE("token usage over augmented labels equals usage over their pieces") {
  std::mt19937_64 rng(46);
  synth::DatasetShape shape;
  shape.samples = 80;
  shape.writers = 4;
  const Dataset ds = synth::random_dataset(rng, shape);
  FoldSplit fold;
  for (const auto& s : ds.samples()) fold.train_ids.push_back(s.id);
  std::vector<std::string> labels;
  for (const auto& s : ds.samples()) labels.push_back(s.label);
  const auto model = train_bpe(labels, 30);

  for (std::size_t n : {0u, 1u, 2u, 3u}) {
    AugmentPlan plan;
    plan.n_concat = n;
    const auto epoch = augment_epoch(fold, ds, plan, &model, 0);
    std::vector<TokenSequence> joined;
    std::vector<TokenSequence> pieces;
    for (const auto& s : epoch) {
      joined.push_back(*s.token_ids);
      for (const auto& id : s.source_ids) pieces.push_back(encode(model, ds.at(id).label));
    }
    const auto a = token_usage_of(model, joined);
    const auto b = token_usage_of(model, pieces);
    CHECK(a.counts == b.counts);
  }
}
