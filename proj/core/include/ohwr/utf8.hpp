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

#include <string>
#include <string_view>

namespace ohwr::utf8 {

// Decodes UTF-8 into code points. Throws InputError on malformed input
// (overlong forms, surrogates and truncated sequences are rejected).
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view text);
std::string encode(char32_t cp);

// C0, DEL and C1 control characters.
bool is_control(char32_t cp);

// Printable rendering of a code point for diagnostics, e.g. "'a' (U+0061)".
std::string describe(char32_t cp);

}  // namespace ohwr::utf8
