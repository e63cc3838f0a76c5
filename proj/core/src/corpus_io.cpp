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

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ohwr/io.hpp"
#include "ohwr/corpus.hpp"
#include "ohwr/error.hpp"

namespace ohwr {

using nlohmann::json;

namespace {

const json& require(const json& record, const char* key, std::size_t line) {
  auto it = record.find(key);
  if (it == record.end()) throw ParseError(line, std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& record, const char* key, std::size_t line) {
  const json& v = require(record, key, line);
  if (!v.is_string()) throw ParseError(line, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

// Reads records and enforces the cross-record invariants with line numbers.
class DatasetReader {
 public:
  void add_line(std::string_view text, std::size_t line) {
    if (text.find_first_not_of(" \t\r") == std::string_view::npos) return;
    json record;
    try {
      record = json::parse(text);
    } catch (const json::exception& e) {
      throw ParseError(line, std::string("malformed JSON: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(line, "record must be a JSON object");

    Sample sample;
    sample.id = require_string(record, "id", line);
    sample.writer_id = require_string(record, "writer", line);
    sample.label = require_string(record, "label", line);
    const json& frames = require(record, "signal", line);
    if (!frames.is_array() || frames.empty()) {
      throw ParseError(line, "field 'signal' must be a non-empty array of frames");
    }
    for (std::size_t t = 0; t < frames.size(); ++t) {
      const json& frame = frames[t];
      if (!frame.is_array() || frame.empty()) {
        throw ParseError(line, "frame " + std::to_string(t) + " must be a non-empty array");
      }
      if (channels_ == 0) channels_ = frame.size();
      if (frame.size() != channels_) {
        throw ParseError(line, "channel-count mismatch: frame " + std::to_string(t) + " has " +
                                   std::to_string(frame.size()) + " values, expected " +
                                   std::to_string(channels_));
      }
      for (const json& v : frame) {
        if (!v.is_number()) throw ParseError(line, "signal values must be numbers");
        const auto f = static_cast<float>(v.get<double>());
        if (!std::isfinite(f)) throw ParseError(line, "non-finite signal value");
        sample.signal.values.push_back(f);
      }
    }
    sample.signal.channels = channels_;
    try {
      validate_sample(sample);
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(line, e.what());
    }
    if (!ids_.insert(sample.id).second) {
      throw ParseError(line, "duplicate sample id '" + sample.id + "'");
    }
    samples_.push_back(std::move(sample));
  }

  Dataset finish() { return Dataset(std::move(samples_)); }

 private:
  std::size_t channels_ = 0;
  std::set<std::string> ids_;
  std::vector<Sample> samples_;
};

void append_float(std::string& out, float v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, end);
}

}  // namespace

Dataset parse_dataset(std::string_view jsonl) {
  DatasetReader reader;
  std::size_t line = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    reader.add_line(jsonl.substr(start, end - start), ++line);
    start = end + 1;
  }
  return reader.finish();
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open dataset file " + path.string());
  DatasetReader reader;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) reader.add_line(text, ++line);
  return reader.finish();
}

std::string serialize_sample_fields(const Sample& sample) {
  std::string out;
  out += "\"id\":";
  out += json(sample.id).dump();
  out += ",\"writer\":";
  out += json(sample.writer_id).dump();
  out += ",\"label\":";
  out += json(sample.label).dump();
  out += ",\"signal\":[";
  const std::size_t frames = sample.signal.frame_count();
  for (std::size_t t = 0; t < frames; ++t) {
    if (t > 0) out += ',';
    out += '[';
    const auto frame = sample.signal.frame(t);
    for (std::size_t c = 0; c < frame.size(); ++c) {
      if (c > 0) out += ',';
      append_float(out, frame[c]);
    }
    out += ']';
  }
  out += ']';
  return out;
}

std::string serialize_dataset(const Dataset& dataset) {
  std::string out;
  for (const Sample& s : dataset.samples()) {
    out += '{';
    out += serialize_sample_fields(s);
    out += "}\n";
  }
  return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  write_file(path, serialize_dataset(dataset));
}

std::string serialize_folds(const std::vector<FoldSplit>& folds, std::uint64_t seed) {
  json doc;
  doc["protocol"] = folds.empty() ? "wi" : std::string(to_string(folds.front().protocol));
  doc["k"] = folds.size();
  doc["seed"] = seed;
  json arr = json::array();
  for (const FoldSplit& f : folds) {
    arr.push_back({{"train", f.train_ids}, {"val", f.val_ids}});
  }
  doc["folds"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::vector<FoldSplit> parse_folds(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed fold file: ") + e.what());
  }
  try {
    const Protocol protocol = parse_protocol(doc.at("protocol").get<std::string>());
    const auto k = doc.at("k").get<std::size_t>();
    const json& arr = doc.at("folds");
    if (!arr.is_array() || arr.size() != k) {
      throw SchemaError("fold file declares k=" + std::to_string(k) + " but lists " +
                        std::to_string(arr.size()) + " folds");
    }
    std::vector<FoldSplit> out;
    for (std::size_t i = 0; i < k; ++i) {
      FoldSplit f;
      f.fold_index = i;
      f.protocol = protocol;
      f.train_ids = arr[i].at("train").get<std::vector<std::string>>();
      f.val_ids = arr[i].at("val").get<std::vector<std::string>>();
      out.push_back(std::move(f));
    }
    return out;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid fold file: ") + e.what());
  }
}

}  // namespace ohwr
