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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ohwr::cli {

// Every knob of a run. Filled from the config file and flags.
struct ExperimentConfig {
  std::filesystem::path dataset;
  std::string protocol = "wd";
  std::size_t folds = 5;
  std::optional<std::size_t> fold;  // all folds when unset
  std::uint64_t seed = 0;
  std::string tokenizer = "bigram";
  std::vector<std::size_t> vocab_sizes{100, 200, 300, 400, 500};
  std::size_t concat = 0;
  std::string separator;
  std::filesystem::path out = "out";

  std::uint64_t epoch = 0;
  std::size_t frame_subsample = 1;
  std::filesystem::path model;
  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path logits;
  std::filesystem::path index;
  std::filesystem::path refs;
};

nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

void cmd_split(const ExperimentConfig& config, std::ostream& out);
void cmd_train_tokenizer(const ExperimentConfig& config, std::ostream& out);
void cmd_encode(const ExperimentConfig& config, std::ostream& out);
void cmd_decode(const ExperimentConfig& config, std::ostream& out);
void cmd_augment(const ExperimentConfig& config, std::ostream& out);
void cmd_score(const ExperimentConfig& config, std::ostream& out);
void cmd_analyze(const ExperimentConfig& config, std::ostream& out);

}  // namespace ohwr::cli
