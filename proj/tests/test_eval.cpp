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
#include <numeric>
#include <random>

#include "ohwr/error.hpp"
#include "ohwr/eval.hpp"
#include "ohwr/utf8.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace ohwr;

TEST_CASE("edit distance: examples and direction of insertions") {
  CHECK(edit_distance("abc", "abc") == EditCounts{0, 0, 0, 0});
  CHECK(edit_distance("ab", "abc") == EditCounts{1, 0, 0, 1});
  CHECK(edit_distance("abc", "ab") == EditCounts{1, 0, 1, 0});
  CHECK(edit_distance("abc", "axc") == EditCounts{1, 1, 0, 0});
  CHECK(edit_distance("", "") == EditCounts{});
  CHECK(edit_distance("ä", "a").distance == 1);  // code points, not bytes
}

TEST_CASE("edit distance: agrees with the recursive oracle") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) {
    const auto a = synth::random_word(rng, "abcd", 0, 12);
    const auto b = synth::random_word(rng, "abcd", 0, 12);
    const EditCounts e = edit_distance(a, b);
    CHECK(e.distance == oracle::levenshtein(a, b));
    CHECK(e.distance == e.substitutions + e.deletions + e.insertions);
    // Length difference is carried by deletions minus insertions.
    CHECK(static_cast<long>(e.deletions) - static_cast<long>(e.insertions) ==
          static_cast<long>(a.size()) - static_cast<long>(b.size()));
  }
}

TEST_CASE("edit distance is a metric") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const auto a = synth::random_word(rng, "abc", 0, 8);
    const auto b = synth::random_word(rng, "abc", 0, 8);
    const auto c = synth::random_word(rng, "abc", 0, 8);
    const auto ab = edit_distance(a, b).distance;
    CHECK(ab == edit_distance(b, a).distance);
    CHECK(edit_distance(a, a).distance == 0);
    CHECK((ab == 0) == (a == b));
    CHECK(edit_distance(a, c).distance <= ab + edit_distance(b, c).distance);
  }
}

TEST_CASE("cer examples") {
  const std::vector<std::string> refs{"abc", "de"};
  CHECK(cer(refs, refs) == 0.0);
  CHECK(cer(std::vector<std::string>{"ab"}, std::vector<std::string>{"abc"}) ==
        doctest::Approx(100.0 / 3.0).epsilon(1e-12));
  CHECK(cer(std::vector<std::string>{"", ""}, std::vector<std::string>{"a", "b"}) == 100.0);
  CHECK_THROWS_AS(cer(std::vector<std::string>{"a"}, refs), InvalidArgument);
  CHECK_THROWS_AS(cer(std::vector<std::string>{"a"}, std::vector<std::string>{""}), InvalidArgument);
}

TEST_CASE("cer is corpus-normalized") {
  // 1 edit over 1 char and 0 over 9: corpus 10%, per-sample mean would be 50%.
  const std::vector<std::string> preds{"x", "abcdefghi"};
  const std::vector<std::string> refs{"a", "abcdefghi"};
  CHECK(cer(preds, refs) == doctest::Approx(10.0));
}

TEST_CASE("wer examples") {
  CHECK(wer(std::vector<std::string>{"hello"}, std::vector<std::string>{"hello"}) == 0.0);
  CHECK(wer(std::vector<std::string>{"helo"}, std::vector<std::string>{"hello"}) == 100.0);
  CHECK(wer(std::vector<std::string>{"the cat"}, std::vector<std::string>{"the  cat sat"}) ==
        doctest::Approx(100.0 / 3.0));
  CHECK(split_words("  a\tb \n c ") == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("wer agrees with a word-level oracle") {
  std::mt19937_64 rng(14);
  const std::vector<std::string> lexicon{"ab", "ba", "abc", "c", "cab"};
  auto sentence = [&] {
    std::vector<std::string> words(synth::uniform(rng, 1, 6));
    for (auto& w : words) w = lexicon[rng() % lexicon.size()];
    return words;
  };
  auto join = [](const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
    return out;
  };
  std::vector<std::string> preds;
  std::vector<std::string> refs;
  std::size_t edits = 0;
  std::size_t words = 0;
  for (int i = 0; i < 200; ++i) {
    const auto p = sentence();
    const auto r = sentence();
    preds.push_back(join(p));
    refs.push_back(join(r));
    edits += oracle::levenshtein(p, r);
    words += r.size();
  }
  CHECK(wer(preds, refs) == doctest::Approx(100.0 * static_cast<double>(edits) / words));
}

TEST_CASE("cer and wer are invariant under consistent permutation") {
  std::mt19937_64 rng(15);
  auto preds = synth::random_corpus(rng, "ab c", 50, 10);
  auto refs = synth::random_corpus(rng, "abc", 50, 10);
  const double c0 = cer(preds, refs);
  const double w0 = wer(preds, refs);
  std::vector<std::size_t> order(50);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::string> p2, r2;
  for (auto i : order) {
    p2.push_back(preds[i]);
    r2.push_back(refs[i]);
  }
  CHECK(cer(p2, r2) == doctest::Approx(c0).epsilon(1e-12));
  CHECK(wer(p2, r2) == doctest::Approx(w0).epsilon(1e-12));
}

TEST_CASE("evaluate: totals, per-sample rows and JSON") {
  const std::vector<std::string> preds{"ab", "xyz", ""};
  const std::vector<std::string> refs{"abc", "xz", "q"};
  const std::vector<std::string> ids{"p", "q", "r"};
  const EvalReport r = evaluate(preds, refs, ids);
  CHECK(r.n_samples == 3);
  CHECK(r.insertions == 2);  // "c" and "q"
  CHECK(r.deletions == 1);   // "y"
  CHECK(r.substitutions == 0);
  CHECK(r.ref_chars == 6);
  CHECK(r.cer == doctest::Approx(50.0));
  CHECK(r.wer == doctest::Approx(100.0));
  REQUIRE(r.per_sample);
  CHECK((*r.per_sample)[1] == SampleEdits{"q", 1, 2});

  const auto doc = nlohmann::json::parse(report_to_json(r));
  CHECK(doc["n_samples"] == 3);
  CHECK(doc["per_sample"].size() == 3);
  CHECK(doc["per_sample"][2]["id"] == "r");

  const EvalReport bare = evaluate(preds, refs, {}, false);
  CHECK(!bare.per_sample);
  CHECK(nlohmann::json::parse(report_to_json(bare)).count("per_sample") == 0);
}

TEST_CASE("token usage: hand-enumerated bigram example") {
  const TokenizerModel model(TokenizerKind::kBigram, U"ab", {U"a", U"b", U"ab"});
  const std::vector<std::string> labels{"ab", "a"};
  const auto t = token_usage(model, labels);
  CHECK(t.total == 2);
  CHECK(t.counts == std::array<std::size_t, 5>{1, 1, 0, 0, 0});
  CHECK(t.percent[0] == 50.0);
  CHECK(t.percent[1] == 50.0);
  CHECK(token_usage_csv(t) == "size,percent\r\n1,50\r\n2,50\r\n3,0\r\n4,0\r\n5+,0\r\n");
}

TEST_CASE("token usage: bigram mass stays in sizes 1-2 and tables sum to 100") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const auto labels = synth::random_corpus(rng, "abcdefg", 200, 12);
    for (auto kind : {TokenizerKind::kBigram, TokenizerKind::kBpe, TokenizerKind::kUnigram}) {
      const auto model = train_tokenizer(kind, labels, 30);
      const auto t = token_usage(model, labels);
      double sum = 0.0;
      for (double p : t.percent) sum += p;
      CHECK(std::abs(sum - 100.0) <= 0.01);
      if (kind == TokenizerKind::kBigram) {
        CHECK(t.counts[2] == 0);
        CHECK(t.counts[3] == 0);
        CHECK(t.counts[4] == 0);
      }
    }
  }
}

TEST_CASE("token usage: empty input and unknown symbols") {
  const TokenizerModel model(TokenizerKind::kBigram, U"a", {U"a"});
  const auto t = token_usage(model, std::vector<std::string>{});
  CHECK(t.total == 0);
  CHECK(t.percent == std::array<double, 5>{});
  CHECK_THROWS_AS(token_usage(model, std::vector<std::string>{"b"}), UnknownSymbol);
}
