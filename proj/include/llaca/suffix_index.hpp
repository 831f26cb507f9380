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

#ifndef LLACA_SUFFIX_INDEX_HPP_
#define LLACA_SUFFIX_INDEX_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "llaca/corpus.hpp"

namespace llaca {

// Sorted-suffix index over the raw corpus. Sentences are joined with a
// U+0000 sentinel so substring queries never span a sentence boundary
// (the sentinel sorts below every text character). Immutable after build;
// queries are read-only and thread-safe.
class SuffixIndex {
 public:
  static constexpr char32_t kSentinel = U'\0';

  // Prefix-doubling construction, O(n log^2 n).
  static SuffixIndex build(const RawCorpus& corpus);

  // Number of occurrences of `s` in the corpus. O(|s| log N). Unseen -> 0.
  std::size_t occurrences(std::u32string_view s) const;

  // occurrences(s) / total_chars. Throws DataError on an empty index.
  double unigram_p(std::u32string_view s) const;

  // Minimum over split points of log(p(w) / (p(left) * p(right))), natural
  // log. Length-1 words score +infinity (no split points); unattested words
  // score -infinity. O(|w|^2 log N).
  double pmi(std::u32string_view w) const;

  std::uint64_t total_chars() const { return total_chars_; }
  const std::u32string& buffer() const { return buffer_; }
  const std::vector<std::uint32_t>& suffixes() const { return suffixes_; }

 private:
  std::u32string buffer_;
  std::vector<std::uint32_t> suffixes_;
  std::uint64_t total_chars_ = 0;
};

}  // namespace llaca

#endif  // LLACA_SUFFIX_INDEX_HPP_
