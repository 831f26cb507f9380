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

#include "llaca/unicode.hpp"

#include <cstdint>

#include "llaca/errors.hpp"

namespace llaca {

std::u32string utf8_decode(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto b0 = static_cast<std::uint8_t>(bytes[i]);
    std::size_t len;
    char32_t cp;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      throw Utf8Error("invalid UTF-8 lead byte at offset " + std::to_string(i), i);
    }
    if (i + len > n) {
      throw Utf8Error("truncated UTF-8 sequence at offset " + std::to_string(i), i);
    }
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<std::uint8_t>(bytes[i + k]);
      if ((b & 0xC0) != 0x80) {
        throw Utf8Error("invalid UTF-8 continuation at offset " + std::to_string(i + k),
                        i + k);
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlongs, surrogates and out-of-range values.
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (len > 1 && cp < kMin[len]) {
      throw Utf8Error("overlong UTF-8 sequence at offset " + std::to_string(i), i);
    }
    if ((cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      throw Utf8Error("invalid code point at offset " + std::to_string(i), i);
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string utf8_encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size() * 3);
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

bool is_space(char32_t c) {
  switch (c) {
    case U' ':
    case U'\t':
    case U'\r':
    case U'\n':
    case U'\f':
    case U'\v':
    case 0x00A0:   // no-break space
    case 0x1680:   // ogham space mark
    case 0x202F:   // narrow no-break space
    case 0x205F:   // medium mathematical space
    case 0x3000:   // ideographic space
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;  // en quad .. hair space
  }
}

bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_latin_letter(char32_t c) {
  return (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z');
}

bool is_punct(char32_t c) {
  // ASCII punctuation.
  if (c < 0x80) {
    return (c >= U'!' && c <= U'/') || (c >= U':' && c <= U'@') ||
           (c >= U'[' && c <= U'`') || (c >= U'{' && c <= U'~');
  }
  // Common non-ASCII punctuation blocks seen in CJK/Thai corpora.
  if (c == 0x00B7 || c == 0x00A1 || c == 0x00BF) return true;    // · ¡ ¿
  if (c >= 0x2010 && c <= 0x2027) return true;                   // dashes, quotes, …
  if (c >= 0x2030 && c <= 0x205E) return true;                   // ‰ ′ ″ ‹ › etc.
  if (c >= 0x3001 && c <= 0x303F) return true;                   // 、。〈〉「」etc.
  if (c >= 0xFE30 && c <= 0xFE4F) return true;                   // vertical forms
  if (c >= 0xFE50 && c <= 0xFE6F) return true;                   // small forms
  if (c >= 0xFF01 && c <= 0xFF0F) return true;                   // ！＂＃ … ／
  if (c >= 0xFF1A && c <= 0xFF20) return true;                   // ：；＜ … ＠
  if (c >= 0xFF3B && c <= 0xFF40) return true;                   // ［＼ … ｀
  if (c >= 0xFF5B && c <= 0xFF65) return true;                   // ｛｜ … ･
  return false;
}

std::u32string strip_spaces(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (!is_space(c)) out.push_back(c);
  }
  return out;
}

}  // namespace llaca
