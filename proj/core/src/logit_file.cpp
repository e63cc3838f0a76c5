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

#include <cstring>
#include <json.hpp>

#include "ohwr/ctc.hpp"
#include "ohwr/error.hpp"
#include "ohwr/io.hpp"

namespace ohwr {
namespace {

constexpr char kMagic[4] = {'C', 'T', 'C', 'L'};
constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view data, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[at + i])) << (8 * i);
  }
  return v;
}

}  // namespace

std::string encode_logit_record(const LogitMatrix& logits) {
  std::string out(kMagic, sizeof(kMagic));
  put_u32(out, kLogitFileVersion);
  put_u32(out, static_cast<std::uint32_t>(logits.frames()));
  put_u32(out, static_cast<std::uint32_t>(logits.classes()));
  for (double v : logits.values()) {
    const auto f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof(bits));
    put_u32(out, bits);
  }
  return out;
}

LogitMatrix decode_logit_record(std::string_view data, std::uint64_t offset) {
  if (offset > data.size() || data.size() - offset < kHeaderBytes) {
    throw InputError("logit record at offset " + std::to_string(offset) + " is truncated");
  }
  const auto at = static_cast<std::size_t>(offset);
  if (std::memcmp(data.data() + at, kMagic, sizeof(kMagic)) != 0) {
    throw InputError("bad logit record magic at offset " + std::to_string(offset));
  }
  const std::uint32_t version = get_u32(data, at + 4);
  if (version != kLogitFileVersion) {
    throw InputError("unsupported logit record version " + std::to_string(version));
  }
  const std::size_t frames = get_u32(data, at + 8);
  const std::size_t classes = get_u32(data, at + 12);
  const std::size_t count = frames * classes;
  if ((data.size() - at - kHeaderBytes) / 4 < count) {
    throw InputError("logit record at offset " + std::to_string(offset) + " is truncated");
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t bits = get_u32(data, at + kHeaderBytes + 4 * i);
    float f;
    std::memcpy(&f, &bits, sizeof(f));
    values[i] = f;
  }
  return LogitMatrix(frames, classes, std::move(values));
}

LogitArchiveWriter::LogitArchiveWriter(const std::filesystem::path& data_path,
                                       const std::filesystem::path& index_path)
    : data_path_(data_path), index_path_(index_path) {}

void LogitArchiveWriter::add(const std::string& id, const LogitMatrix& logits) {
  index_ += nlohmann::json{{"id", id}, {"offset", data_.size()}}.dump() + "\n";
  data_ += encode_logit_record(logits);
}

void LogitArchiveWriter::close() {
  if (closed_) return;
  closed_ = true;
  write_file(data_path_, data_);
  write_file(index_path_, index_);
}

LogitArchiveWriter::~LogitArchiveWriter() {
  try {
    close();
  } catch (...) {
  }
}

LogitArchive::LogitArchive(const std::filesystem::path& data_path,
                           const std::filesystem::path& index_path)
    : data_(read_file(data_path)) {
  const std::string index = read_file(index_path);
  std::size_t line = 0;
  std::size_t start = 0;
  while (start < index.size()) {
    std::size_t end = index.find('\n', start);
    if (end == std::string::npos) end = index.size();
    ++line;
    const std::string_view text(index.data() + start, end - start);
    start = end + 1;
    if (text.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const auto rec = nlohmann::json::parse(text);
      auto id = rec.at("id").get<std::string>();
      if (!offsets_.emplace(id, rec.at("offset").get<std::uint64_t>()).second) {
        throw ParseError(line, "duplicate logit index id '" + id + "'");
      }
      order_.push_back(std::move(id));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line, std::string("invalid logit index entry: ") + e.what());
    }
  }
}

bool LogitArchive::contains(const std::string& id) const { return offsets_.count(id) > 0; }

LogitMatrix LogitArchive::read(const std::string& id) const {
  auto it = offsets_.find(id);
  if (it == offsets_.end()) throw InputError("logit index has no entry for '" + id + "'");
  return decode_logit_record(data_, it->second);
}

std::vector<std::string> LogitArchive::ids() const { return order_; }

}  // namespace ohwr
