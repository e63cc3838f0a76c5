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

#include <benchmark/benchmark.h>

#include <random>

#include "ohwr/eval.hpp"
#include "support/synth.hpp"

namespace {

void BM_EditDistance(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto len = static_cast<std::size_t>(state.range(0));
  const auto a = synth::random_word(rng, "abcdefgh", len, len);
  const auto b = synth::random_word(rng, "abcdefgh", len, len);
  for (auto _ : state) benchmark::DoNotOptimize(ohwr::edit_distance(a, b));
}
BENCHMARK(BM_EditDistance)->Arg(8)->Arg(32)->Arg(128);

void BM_Cer(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto preds = synth::random_corpus(rng, "abcdefgh", 2000, 12);
  const auto refs = synth::random_corpus(rng, "abcdefgh", 2000, 12);
  for (auto _ : state) benchmark::DoNotOptimize(ohwr::cer(preds, refs));
}
BENCHMARK(BM_Cer);

}  // namespace
