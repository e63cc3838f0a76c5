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
#include <stdexcept>
#include <string>

namespace ohwr {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Errors caused by caller input (bad files, bad arguments). The CLI maps
// these to exit code 2; anything else is an internal error.
class InputError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

// A character that the tokenizer alphabet does not cover. The offset is in
// code points from the start of the encoded text.
class UnknownSymbol : public InputError {
 public:
  UnknownSymbol(char32_t symbol, std::size_t offset);

  char32_t symbol() const { return symbol_; }
  std::size_t offset() const { return offset_; }

 private:
  char32_t symbol_;
  std::size_t offset_;
};

// Token id outside the vocabulary.
class UnknownToken : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace ohwr
