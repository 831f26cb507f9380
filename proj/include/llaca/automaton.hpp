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

#ifndef LLACA_AUTOMATON_HPP_
#define LLACA_AUTOMATON_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "llaca/vocab.hpp"

namespace llaca {

// Trie node with Aho-Corasick links. Nodes live in a contiguous arena and
// refer to each other by index. `edges` holds the real goto transitions,
// sorted by character; missing transitions are resolved through the fail
// chain at match time (behavior-equivalent to materialized virtual
// transitions, without the per-node alphabet blowup).
struct AcNode {
  std::vector<std::pair<char32_t, std::uint32_t>> edges;
  std::uint32_t fail = 0;
  std::uint32_t prev_final = 0;    // nearest final proper ancestor (root for top-level)
  std::uint32_t output_link = 0;   // nearest non-root final on the fail chain, or kNone
  std::uint32_t depth = 0;
  std::uint64_t count = 0;         // vocabulary count if final, else 0
  std::uint64_t subtree_sum = 0;   // sum of counts of all final nodes below, inclusive
  bool is_final = false;           // root is final too (the epsilon word)
  double log_prob = 0.0;           // log(count / subtree_sum(prev_final)), finals only
  double log_prob_unigram = 0.0;   // log(count / total), finals only
};

struct AcMatch {
  std::size_t end = 0;   // exclusive character position of the match end
  std::size_t len = 0;   // match length in characters
  std::uint32_t node = 0;
};

// Weighted Aho-Corasick automaton over a vocabulary. Frozen after build;
// scanning is read-only and thread-safe.
class Automaton {
 public:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;
  static constexpr std::uint32_t kRoot = 0;

  // Trie insertion, then one BFS pass for fail links, prev-final links and
  // output links; subtree sums by post-order accumulation. Linear in total
  // pattern length. An empty vocabulary yields a root-only automaton.
  static Automaton build(const Vocabulary& vocab);

  // count(w) / subtree_sum(prev_final(w)). Throws Error for unknown words.
  double word_prob(std::u32string_view word) const;

  // Emits every (end, len) such that text[end-len, end) is a vocabulary
  // word. O(|text| + matches).
  void scan(std::u32string_view text,
            const std::function<void(const AcMatch&)>& emit) const;
  std::vector<AcMatch> scan(std::u32string_view text) const;

  // State reached from `state` on `c`, chasing fail links on mismatch.
  std::uint32_t next_state(std::uint32_t state, char32_t c) const;

  std::uint64_t total_count() const { return nodes_[kRoot].subtree_sum; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t word_count() const { return word_index_.size(); }
  std::size_t max_word_len() const { return max_word_len_; }
  const AcNode& node(std::uint32_t id) const { return nodes_[id]; }

  // Final node id for a vocabulary word, or kNone.
  std::uint32_t find_word(std::u32string_view word) const;
  bool contains(std::u32string_view word) const { return find_word(word) != kNone; }

  // Longest vocabulary word that is a prefix of `text`, or 0 if none.
  std::size_t longest_prefix_word(std::u32string_view text) const;

 private:
  std::uint32_t child(std::uint32_t state, char32_t c) const;

  std::vector<AcNode> nodes_;
  std::unordered_map<std::u32string, std::uint32_t> word_index_;
  std::size_t max_word_len_ = 0;
};

}  // namespace llaca

#endif  // LLACA_AUTOMATON_HPP_
