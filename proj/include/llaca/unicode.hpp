// Copyright 2026 The llaca Authors
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

#ifndef LLACA_UNICODE_HPP_
#define LLACA_UNICODE_HPP_

#include <string>
#include <string_view>

namespace llaca {

// All indices and lengths in this library are Unicode scalar values, never
// bytes. Text is decoded once at the ingestion boundary and re-encoded when
// written out.

// Decodes UTF-8, throwing Utf8Error (with the byte offset) on invalid input.
std::u32string utf8_decode(std::string_view bytes);

std::string utf8_encode(std::u32string_view text);

// Character classes used by DAG pre-processing and the gold-file tokenizer.
bool is_space(char32_t c);
bool is_ascii_digit(char32_t c);
bool is_latin_letter(char32_t c);
bool is_punct(char32_t c);

// Removes every is_space() character. Used for hallucination validation and
// prediction/gold alignment checks.
std::u32string strip_spaces(std::u32string_view text);

}  // namespace llaca

#endif  // LLACA_UNICODE_HPP_
