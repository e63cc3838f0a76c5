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

#include <json.hpp>

#include "ohwr/error.hpp"
#include "ohwr/io.hpp"
#include "ohwr/tokenizer.hpp"
#include "ohwr/utf8.hpp"

namespace ohwr {

using nlohmann::json;

namespace {

constexpr int kModelVersion = 1;

std::u32string text_field(const json& v, const char* what) {
  if (!v.is_string()) throw SchemaError(std::string(what) + " must be a string");
  try {
    return utf8::decode(v.get<std::string>());
  } catch (const InputError& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string serialize_model(const TokenizerModel& model) {
  json doc;
  doc["version"] = kModelVersion;
  doc["kind"] = std::string(to_string(model.kind()));
  json alphabet = json::array();
  for (char32_t cp : model.alphabet()) alphabet.push_back(utf8::encode(cp));
  doc["alphabet"] = std::move(alphabet);
  json vocab = json::array();
  for (std::size_t i = 0; i < model.vocab_size(); ++i) {
    vocab.push_back({{"id", i + 1}, {"text", utf8::encode(model.vocab()[i])}});
  }
  doc["vocab"] = std::move(vocab);
  if (model.kind() == TokenizerKind::kBpe) {
    json merges = json::array();
    for (const Merge& m : model.merges()) {
      merges.push_back(json::array({utf8::encode(m.left), utf8::encode(m.right)}));
    }
    doc["merges"] = std::move(merges);
  }
  if (model.kind() == TokenizerKind::kUnigram) {
    json logp = json::object();
    for (std::size_t i = 0; i < model.vocab_size(); ++i) {
      logp[std::to_string(i + 1)] = model.logp()[i];
    }
    doc["logp"] = std::move(logp);
  }
  return doc.dump(1) + "\n";
}

TokenizerModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("model file must be a JSON object");
  try {
    const int version = doc.at("version").get<int>();
    if (version != kModelVersion) {
      throw SchemaError("unsupported model version " + std::to_string(version) + " (expected " +
                        std::to_string(kModelVersion) + ")");
    }
    TokenizerKind kind;
    try {
      kind = parse_tokenizer_kind(doc.at("kind").get<std::string>());
    } catch (const InvalidArgument& e) {
      throw SchemaError(e.what());
    }

    std::u32string alphabet;
    for (const json& c : doc.at("alphabet")) {
      const std::u32string cp = text_field(c, "alphabet entry");
      if (cp.size() != 1) throw SchemaError("alphabet entries must be single characters");
      alphabet += cp;
    }

    const json& vocab_json = doc.at("vocab");
    if (!vocab_json.is_array()) throw SchemaError("vocab must be an array");
    std::vector<std::u32string> vocab(vocab_json.size());
    std::vector<bool> seen(vocab_json.size(), false);
    for (const json& entry : vocab_json) {
      const auto id = entry.at("id").get<long long>();
      if (id < 1 || static_cast<std::size_t>(id) > vocab.size()) {
        throw SchemaError("token id " + std::to_string(id) + " outside 1.." +
                          std::to_string(vocab.size()));
      }
      const auto slot = static_cast<std::size_t>(id - 1);
      if (seen[slot]) throw SchemaError("duplicate token id " + std::to_string(id));
      seen[slot] = true;
      vocab[slot] = text_field(entry.at("text"), "token text");
    }

    std::vector<Merge> merges;
    if (kind == TokenizerKind::kBpe) {
      if (!doc.contains("merges")) throw SchemaError("BPE model is missing 'merges'");
      for (const json& m : doc.at("merges")) {
        if (!m.is_array() || m.size() != 2) throw SchemaError("merge must be a [left, right] pair");
        merges.push_back({text_field(m[0], "merge left"), text_field(m[1], "merge right")});
      }
    } else if (doc.contains("merges") && !doc.at("merges").empty()) {
      throw SchemaError("only BPE models carry merges");
    }

    std::vector<double> logp;
    if (kind == TokenizerKind::kUnigram) {
      if (!doc.contains("logp")) throw SchemaError("Unigram model is missing 'logp'");
      const json& lp = doc.at("logp");
      if (!lp.is_object() || lp.size() != vocab.size()) {
        throw SchemaError("'logp' must map every token id to a log-probability");
      }
      logp.resize(vocab.size());
      for (std::size_t i = 0; i < vocab.size(); ++i) {
        const std::string key = std::to_string(i + 1);
        if (!lp.contains(key)) throw SchemaError("'logp' has no entry for id " + key);
        logp[i] = lp.at(key).get<double>();
      }
    } else if (doc.contains("logp") && !doc.at("logp").empty()) {
      throw SchemaError("only Unigram models carry log-probabilities");
    }

    return TokenizerModel(kind, std::move(alphabet), std::move(vocab), std::move(merges),
                          std::move(logp));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid model file: ") + e.what());
  }
}

void save_model(const TokenizerModel& model, const std::filesystem::path& path) {
  write_file(path, serialize_model(model));
}

TokenizerModel load_model(const std::filesystem::path& path) {
  return parse_model(read_file(path));
}

}  // namespace ohwr
