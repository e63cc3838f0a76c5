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

#include "ohwr/ctc.hpp"

namespace {

ohwr::LogitMatrix random_logprobs(std::size_t frames, std::size_t classes) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> values(frames * classes);
  for (double& v : values) v = noise(rng);
  return ohwr::LogitMatrix(frames, classes, values).log_softmax();
}

void BM_ForwardNll(benchmark::State& state) {
  const auto frames = static_cast<std::size_t>(state.range(0));
  const auto lp = random_logprobs(frames, 501);
  ohwr::TokenSequence target;
  for (std::size_t i = 0; i < frames / 4; ++i) target.push_back(static_cast<ohwr::TokenId>(1 + i % 500));
  for (auto _ : state) benchmark::DoNotOptimize(ohwr::ctc_forward_nll(lp, target));
}
BENCHMARK(BM_ForwardNll)->Arg(64)->Arg(256)->Arg(1024);

void BM_GreedyDecode(benchmark::State& state) {
  const auto lp = random_logprobs(static_cast<std::size_t>(state.range(0)), 501);
  for (auto _ : state) benchmark::DoNotOptimize(ohwr::greedy_decode(lp));
}
BENCHMARK(BM_GreedyDecode)->Arg(256)->Arg(1024);

}  // namespace
