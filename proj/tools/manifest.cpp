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

#include "manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <memory>
#include <stdexcept>

#include "ohwr/io.hpp"

namespace ohwr::cli {

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

Manifest::Manifest(std::filesystem::path out_dir, std::string command,
                   nlohmann::ordered_json config)
    : out_dir_(std::move(out_dir)), command_(std::move(command)), config_(std::move(config)) {}

void Manifest::write(const std::filesystem::path& relative, std::string_view contents) {
  write_file(out_dir_ / relative, contents);
  artifacts_.emplace_back(relative.generic_string(), sha256_hex(contents));
}

void Manifest::record(const std::filesystem::path& relative) {
  artifacts_.emplace_back(relative.generic_string(), sha256_hex(read_file(out_dir_ / relative)));
}

std::filesystem::path Manifest::finish() {
  std::sort(artifacts_.begin(), artifacts_.end());
  nlohmann::ordered_json doc;
  doc["command"] = command_;
  doc["version"] = OHWR_VERSION;
  doc["config"] = config_;
  // Provenance only; nothing in this tool trains a network.
  doc["training_hyperparameters"] = {
      {"epochs", 300},
      {"batch_size", 64},
      {"lr_schedule", "30-epoch linear warmup, then cosine annealing"},
      {"warmup_epochs", 30},
      {"optimizer", "AdamW"},
      {"weight_decay", 1e-2},
      {"learning_rate", 1e-3},
  };
  auto& list = doc["artifacts"] = nlohmann::ordered_json::array();
  for (const auto& [path, hash] : artifacts_) list.push_back({{"path", path}, {"sha256", hash}});
  const auto path = out_dir_ / "manifest.json";
  write_file(path, doc.dump(2) + "\n");
  return path;
}

}  // namespace ohwr::cli
