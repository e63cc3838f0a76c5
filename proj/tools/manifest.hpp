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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ohwr::cli {

std::string sha256_hex(std::string_view bytes);

// Collects every artifact a command writes and emits manifest.json last.
// Paths are recorded relative to the output directory.
class Manifest {
 public:
  Manifest(std::filesystem::path out_dir, std::string command, nlohmann::ordered_json config);

  // Writes the file and records its hash.
  void write(const std::filesystem::path& relative, std::string_view contents);
  // Records a file written by other means (e.g. streamed).
  void record(const std::filesystem::path& relative);

  const std::filesystem::path& out_dir() const { return out_dir_; }
  std::filesystem::path finish();

 private:
  std::filesystem::path out_dir_;
  std::string command_;
  nlohmann::ordered_json config_;
  std::vector<std::pair<std::string, std::string>> artifacts_;
};

}  // namespace ohwr::cli
