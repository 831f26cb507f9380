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

#ifndef LLACA_VOCAB_HPP_
#define LLACA_VOCAB_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "llaca/corpus.hpp"
#include "llaca/suffix_index.hpp"

namespace llaca {

struct VocabEntry {
  std::u32string word;
  std::uint64_t count = 0;
  std::optional<double> pmi;  // unset until pmi_filter runs
};

// Counted vocabulary. Single writer during construction; immutable and
// shareable once finished.
class Vocabulary {
 public:
  using Map = std::unordered_map<std::u32string, VocabEntry>;

  void add(std::u32string_view word, std::uint64_t n = 1);
  void set_pmi(std::u32string_view word, double pmi);
  const VocabEntry* find(std::u32string_view word) const;

  std::uint64_t total_count() const { return total_count_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Map& entries() const { return entries_; }

  // Words in code-point order; the deterministic iteration order used by
  // serialization and the automaton builder.
  std::vector<const VocabEntry*> sorted_entries() const;

 private:
  Map entries_;
  std::uint64_t total_count_ = 0;
};

struct LlmParseResult {
  std::vector<std::vector<std::u32string>> accepted;  // token lists
  std::size_t rejected = 0;
};

// A line is accepted iff its tokens' concatenation (all whitespace removed)
// equals the raw sentence exactly; anything else (translations, paraphrases,
// chatter, bad UTF-8) is rejected whole. Missing lines count as rejected.
LlmParseResult parse_llm_lines(std::span<const std::u32string> raw_sentences,
                               std::span<const std::string> output_lines);

Vocabulary count_words(const std::vector<std::vector<std::u32string>>& accepted);

// Computes PMI for every entry, drops -infinity entries unconditionally,
// keeps all single-character entries, and keeps the top ceil(top_ratio * M)
// of the finite-PMI multi-character entries ranked by PMI descending
// (ties: higher count, then code-point order). top_ratio must be in (0, 1].
Vocabulary pmi_filter(const Vocabulary& vocab, const SuffixIndex& index, double top_ratio);

// Counts summed per word; PMI cleared (recompute before filtering).
Vocabulary merge(const Vocabulary& a, const Vocabulary& b);

// TSV persistence: `word<TAB>count<LF>`, UTF-8, '#' lines are comments.
// This file is the sole durable artifact; the automaton is rebuilt from it.
void save_tsv(const Vocabulary& vocab, const std::string& path);
Vocabulary load_tsv(const std::string& path);
Vocabulary parse_tsv(std::string_view text, const std::string& origin);

}  // namespace llaca

#endif  // LLACA_VOCAB_HPP_
