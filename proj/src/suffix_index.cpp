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

#include "llaca/suffix_index.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "llaca/errors.hpp"

namespace llaca {

SuffixIndex SuffixIndex::build(const RawCorpus& corpus) {
  SuffixIndex index;
  std::size_t total = 0;
  for (const auto& s : corpus.sentences) total += s.size();
  index.total_chars_ = total;
  index.buffer_.reserve(total + (corpus.sentences.empty() ? 0 : corpus.sentences.size() - 1));
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    if (i > 0) index.buffer_.push_back(kSentinel);
    index.buffer_ += corpus.sentences[i];
  }

  const std::size_t n = index.buffer_.size();
  index.suffixes_.resize(n);
  std::iota(index.suffixes_.begin(), index.suffixes_.end(), 0u);
  if (n == 0) return index;

  // Prefix doubling over rank pairs.
  std::vector<std::uint32_t> rank(n), next_rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    rank[i] = static_cast<std::uint32_t>(index.buffer_[i]);
  }
  auto& sa = index.suffixes_;
  for (std::size_t k = 1;; k *= 2) {
    auto pair_of = [&](std::uint32_t pos) {
      std::uint64_t hi = rank[pos];
      std::uint64_t lo = (pos + k < n) ? rank[pos + k] + 1u : 0u;
      return (hi << 32) | lo;
    };
    std::sort(sa.begin(), sa.end(),
              [&](std::uint32_t a, std::uint32_t b) { return pair_of(a) < pair_of(b); });
    next_rank[sa[0]] = 0;
    bool all_distinct = true;
    for (std::size_t i = 1; i < n; ++i) {
      bool eq = pair_of(sa[i]) == pair_of(sa[i - 1]);
      next_rank[sa[i]] = next_rank[sa[i - 1]] + (eq ? 0 : 1);
      all_distinct &= !eq;
    }
    rank.swap(next_rank);
    if (all_distinct || k >= n) break;
  }
  return index;
}

namespace {

// Compares the suffix at `pos` against pattern `s`, prefix-wise:
// -1 if suffix < s, 0 if s is a prefix of the suffix, +1 if suffix > s.
int compare_suffix(const std::u32string& buf, std::uint32_t pos, std::u32string_view s) {
  const std::size_t n = buf.size();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (pos + i >= n) return -1;  // suffix ran out: it is a proper prefix of s
    char32_t a = buf[pos + i];
    char32_t b = s[i];
    if (a != b) return a < b ? -1 : 1;
  }
  return 0;
}

}  // namespace

std::size_t SuffixIndex::occurrences(std::u32string_view s) const {
  assert(!s.empty());
  auto lo = std::partition_point(suffixes_.begin(), suffixes_.end(), [&](std::uint32_t pos) {
    return compare_suffix(buffer_, pos, s) < 0;
  });
  auto hi = std::partition_point(lo, suffixes_.end(), [&](std::uint32_t pos) {
    return compare_suffix(buffer_, pos, s) == 0;
  });
  return static_cast<std::size_t>(hi - lo);
}

double SuffixIndex::unigram_p(std::u32string_view s) const {
  if (total_chars_ == 0) {
    throw DataError("unigram_p: undefined on an empty index");
  }
  return static_cast<double>(occurrences(s)) / static_cast<double>(total_chars_);
}

double SuffixIndex::pmi(std::u32string_view w) const {
  assert(!w.empty());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (w.size() == 1) return kInf;  // no split points; single chars always pass
  if (occurrences(w) == 0) return -kInf;
  const double p_whole = unigram_p(w);
  double best = kInf;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double p_left = unigram_p(w.substr(0, i));
    const double p_right = unigram_p(w.substr(i));
    best = std::min(best, std::log(p_whole / (p_left * p_right)));
  }
  return best;
}

}  // namespace llaca
