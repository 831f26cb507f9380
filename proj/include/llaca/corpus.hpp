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

#ifndef LLACA_CORPUS_HPP_
#define LLACA_CORPUS_HPP_

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace llaca {

// Half-open character range [start, end) over a sentence. The spans of one
// segmentation tile the sentence: contiguous, non-overlapping, covering.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  auto operator<=>(const Span&) const = default;
};

// Unsegmented sentences, one per non-empty input line. Immutable after load.
struct RawCorpus {
  std::vector<std::u32string> sentences;
  std::string id;
};

// Whitespace-tokenized sentences with spans over the stripped sentence.
struct GoldCorpus {
  std::vector<std::vector<std::u32string>> sentences;  // token lists
  std::vector<std::vector<Span>> spans;
  std::string id;
};

// Optional pre-normalization hook, applied per sentence at load time. Off by
// default: input passes through verbatim, so predictions stay aligned with
// gold spans. Plug in an external normalizer (e.g. a script converter) here
// when the corpus needs one.
using SentenceTransform = std::function<std::u32string(std::u32string)>;

// One sentence per non-empty line; interior whitespace preserved verbatim.
// Throws DataError/Utf8Error on invalid input.
RawCorpus load_raw(const std::string& path, const SentenceTransform& normalize = {});
RawCorpus parse_raw(std::string_view text, std::string id,
                    const SentenceTransform& normalize = {});

// Tokens split on whitespace runs; whitespace-only lines are skipped.
GoldCorpus load_gold(const std::string& path);
GoldCorpus parse_gold(std::string_view text, std::string id);

// Concatenates each sentence's tokens with no separators.
RawCorpus strip_gold(const GoldCorpus& gold);

// Spans of a token list over the concatenation of the tokens.
std::vector<Span> spans_of(const std::vector<std::u32string>& tokens);

// Writes sentences as UTF-8, LF-terminated lines.
void save_raw(const RawCorpus& corpus, const std::string& path);

}  // namespace llaca

#endif  // LLACA_CORPUS_HPP_
