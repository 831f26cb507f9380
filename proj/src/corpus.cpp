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

#include "llaca/corpus.hpp"

#include <fstream>
#include <sstream>

#include "llaca/errors.hpp"
#include "llaca/unicode.hpp"

namespace llaca {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

// Splits on LF, tolerating a trailing CR per line. The final line needs no
// terminator.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

}  // namespace

RawCorpus parse_raw(std::string_view text, std::string id,
                    const SentenceTransform& normalize) {
  RawCorpus corpus;
  corpus.id = std::move(id);
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    if (line.empty()) continue;
    const auto byte_base = static_cast<std::size_t>(line.data() - text.data());
    std::u32string sentence;
    try {
      sentence = utf8_decode(line);
    } catch (const Utf8Error& e) {
      throw Utf8Error("line " + std::to_string(line_no) + ": " + e.what(),
                      byte_base + e.byte_offset());
    }
    if (normalize) sentence = normalize(std::move(sentence));
    if (sentence.empty()) continue;
    for (char32_t c : sentence) {
      if (c == U'\0') {
        throw DataError(corpus.id + ": line " + std::to_string(line_no) +
                        " contains the reserved U+0000 sentinel");
      }
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

RawCorpus load_raw(const std::string& path, const SentenceTransform& normalize) {
  return parse_raw(read_file(path), path, normalize);
}

GoldCorpus parse_gold(std::string_view text, std::string id) {
  GoldCorpus gold;
  gold.id = std::move(id);
  for (std::string_view line : split_lines(text)) {
    if (line.empty()) continue;
    std::u32string decoded = utf8_decode(line);
    std::vector<std::u32string> tokens;
    std::u32string current;
    for (char32_t c : decoded) {
      if (is_space(c)) {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(c);
      }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    if (tokens.empty()) continue;  // whitespace-only line
    gold.spans.push_back(spans_of(tokens));
    gold.sentences.push_back(std::move(tokens));
  }
  return gold;
}

GoldCorpus load_gold(const std::string& path) {
  return parse_gold(read_file(path), path);
}

RawCorpus strip_gold(const GoldCorpus& gold) {
  RawCorpus raw;
  raw.id = gold.id;
  raw.sentences.reserve(gold.sentences.size());
  for (const auto& tokens : gold.sentences) {
    std::u32string sentence;
    for (const auto& tok : tokens) sentence += tok;
    raw.sentences.push_back(std::move(sentence));
  }
  return raw;
}

std::vector<Span> spans_of(const std::vector<std::u32string>& tokens) {
  std::vector<Span> spans;
  spans.reserve(tokens.size());
  std::size_t pos = 0;
  for (const auto& tok : tokens) {
    spans.push_back({pos, pos + tok.size()});
    pos += tok.size();
  }
  return spans;
}

void save_raw(const RawCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  for (const auto& sentence : corpus.sentences) {
    out << utf8_encode(sentence) << '\n';
  }
}

}  // namespace llaca
