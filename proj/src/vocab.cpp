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

#include "llaca/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "llaca/errors.hpp"
#include "llaca/unicode.hpp"

namespace llaca {

void Vocabulary::add(std::u32string_view word, std::uint64_t n) {
  auto [it, inserted] = entries_.try_emplace(std::u32string(word));
  if (inserted) it->second.word = it->first;
  it->second.count += n;
  it->second.pmi.reset();
  total_count_ += n;
}

void Vocabulary::set_pmi(std::u32string_view word, double pmi) {
  auto it = entries_.find(std::u32string(word));
  if (it != entries_.end()) it->second.pmi = pmi;
}

const VocabEntry* Vocabulary::find(std::u32string_view word) const {
  auto it = entries_.find(std::u32string(word));
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<const VocabEntry*> Vocabulary::sorted_entries() const {
  std::vector<const VocabEntry*> out;
  out.reserve(entries_.size());
  for (const auto& [word, entry] : entries_) out.push_back(&entry);
  std::sort(out.begin(), out.end(),
            [](const VocabEntry* a, const VocabEntry* b) { return a->word < b->word; });
  return out;
}

LlmParseResult parse_llm_lines(std::span<const std::u32string> raw_sentences,
                               std::span<const std::string> output_lines) {
  LlmParseResult result;
  for (std::size_t i = 0; i < raw_sentences.size(); ++i) {
    if (i >= output_lines.size()) {  // missing line: pad as empty, reject
      ++result.rejected;
      continue;
    }
    std::u32string decoded;
    try {
      decoded = utf8_decode(output_lines[i]);
    } catch (const Utf8Error&) {
      ++result.rejected;
      continue;
    }
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

    std::u32string concat;
    for (const auto& tok : tokens) concat += tok;
    if (tokens.empty() || concat != raw_sentences[i]) {
      ++result.rejected;
      continue;
    }
    result.accepted.push_back(std::move(tokens));
  }
  return result;
}

Vocabulary count_words(const std::vector<std::vector<std::u32string>>& accepted) {
  Vocabulary vocab;
  for (const auto& tokens : accepted) {
    for (const auto& tok : tokens) vocab.add(tok);
  }
  return vocab;
}

Vocabulary pmi_filter(const Vocabulary& vocab, const SuffixIndex& index, double top_ratio) {
  if (!(top_ratio > 0.0 && top_ratio <= 1.0)) {
    throw ConfigError("top_ratio must be in (0, 1]");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<VocabEntry> singles;
  std::vector<VocabEntry> ranked;  // finite-PMI multi-character entries
  for (const VocabEntry* e : vocab.sorted_entries()) {
    VocabEntry scored = *e;
    scored.pmi = index.pmi(e->word);
    if (*scored.pmi == -kInf) continue;  // unattested: hallucination, drop
    if (e->word.size() == 1) {
      singles.push_back(std::move(scored));
    } else {
      ranked.push_back(std::move(scored));
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const VocabEntry& a, const VocabEntry& b) {
    if (*a.pmi != *b.pmi) return *a.pmi > *b.pmi;
    if (a.count != b.count) return a.count > b.count;
    return a.word < b.word;
  });
  const auto keep = static_cast<std::size_t>(
      std::ceil(top_ratio * static_cast<double>(ranked.size())));
  ranked.resize(std::min(keep, ranked.size()));

  Vocabulary out;
  for (const auto& e : singles) {
    out.add(e.word, e.count);
    out.set_pmi(e.word, *e.pmi);
  }
  for (const auto& e : ranked) {
    out.add(e.word, e.count);
    out.set_pmi(e.word, *e.pmi);
  }
  return out;
}

Vocabulary merge(const Vocabulary& a, const Vocabulary& b) {
  Vocabulary out;
  for (const auto& [word, entry] : a.entries()) out.add(word, entry.count);
  for (const auto& [word, entry] : b.entries()) out.add(word, entry.count);
  return out;
}

void save_tsv(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write vocabulary: " + path);
  for (const VocabEntry* e : vocab.sorted_entries()) {
    out << utf8_encode(e->word) << '\t' << e->count << '\n';
  }
}

Vocabulary parse_tsv(std::string_view text, const std::string& origin) {
  Vocabulary vocab;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = (nl == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') continue;

    auto fail = [&](const char* why) -> DataError {
      return DataError(origin + ": line " + std::to_string(line_no) + ": " + why);
    };
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw fail("expected 'word<TAB>count'");
    std::string_view word_bytes = line.substr(0, tab);
    std::string_view count_str = line.substr(tab + 1);
    if (word_bytes.empty()) throw fail("empty word");
    if (count_str.empty()) throw fail("empty count");
    std::uint64_t count = 0;
    for (char ch : count_str) {
      if (ch < '0' || ch > '9') throw fail("count is not a base-10 integer");
      count = count * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    if (count == 0) throw fail("count must be >= 1");
    std::u32string word;
    try {
      word = utf8_decode(word_bytes);
    } catch (const Utf8Error&) {
      throw fail("invalid UTF-8 in word");
    }
    for (char32_t c : word) {
      if (is_space(c) || c == U'\0') throw fail("word contains whitespace or U+0000");
    }
    vocab.add(word, count);  // duplicate word lines: counts summed
  }
  return vocab;
}

Vocabulary load_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open vocabulary: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tsv(ss.str(), path);
}

}  // namespace llaca
