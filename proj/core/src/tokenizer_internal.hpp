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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ohwr/tokenizer.hpp"

namespace ohwr {

std::u32string collect_alphabet(std::span<const std::string> labels);
void check_training_input(std::span<const std::string> labels, std::size_t alphabet_size,
                          std::size_t vocab_size);

// Replaces non-overlapping (left, right) occurrences, scanning left to right.
void apply_merge(std::vector<std::u32string>& symbols, std::u32string_view left,
                 std::u32string_view right);

TokenSequence viterbi_segment(const TokenizerModel& model, std::u32string_view text);

}  // namespace ohwr
