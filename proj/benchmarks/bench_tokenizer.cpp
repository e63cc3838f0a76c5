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

#include "ohwr/tokenizer.hpp"
#include "support/synth.hpp"

namespace {

const std::vector<std::string>& corpus() {
  static const std::vector<std::string> words = [] {
    std::mt19937_64 rng(1);
    return synth::random_corpus(rng, "abcdefghijklmnopqrstuvwxyz", 5000, 12);
  }();
  return words;
}

template <ohwr::TokenizerKind Kind>
void BM_Train(benchmark::State& state) {
  const auto v = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ohwr::train_tokenizer(Kind, corpus(), v));
  }
}
BENCHMARK(BM_Train<ohwr::TokenizerKind::kBigram>)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Train<ohwr::TokenizerKind::kBpe>)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Train<ohwr::TokenizerKind::kUnigram>)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

template <ohwr::TokenizerKind Kind>
void BM_Encode(benchmark::State& state) {
  const auto model = ohwr::train_tokenizer(Kind, corpus(), 300);
  std::size_t chars = 0;
  for (auto _ : state) {
    for (const auto& w : corpus()) {
      benchmark::DoNotOptimize(ohwr::encode(model, w));
      chars += w.size();
    }
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(chars));
}
BENCHMARK(BM_Encode<ohwr::TokenizerKind::kBigram>);
BENCHMARK(BM_Encode<ohwr::TokenizerKind::kBpe>);
BENCHMARK(BM_Encode<ohwr::TokenizerKind::kUnigram>);

}  // namespace
