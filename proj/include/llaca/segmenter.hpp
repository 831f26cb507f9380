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

#ifndef LLACA_SEGMENTER_HPP_
#define LLACA_SEGMENTER_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "llaca/automaton.hpp"
#include "llaca/corpus.hpp"

namespace llaca {

enum class Decoder { kLlaca, kUnigram, kFmm, kBmm };

// Parses a decoder name (llaca, uni, fmm, bmm); throws ConfigError.
Decoder decoder_from_name(const std::string& name);
const char* decoder_name(Decoder d);

struct DagEdge {
  std::size_t start = 0;
  double log_prob = 0.0;
};

// Segmentation DAG over one sentence: for each end position e, the list of
// candidate edges (s, log_prob) meaning text[s, e) may be one word. Fallback
// edges guarantee every position is reachable; no edge crosses a hard
// boundary.
struct SegDag {
  std::size_t length = 0;
  std::vector<std::vector<DagEdge>> edges;  // indexed by end position 1..length
  std::vector<char> hard_boundary;          // indexed 0..length
};

struct Segmentation {
  std::vector<Span> spans;
  double score = 0.0;  // sum of member edge log-probs
};

// (log p_i, n_i) of one decoded sentence, feeding the perplexity formulas.
struct SentenceScore {
  double log_p = 0.0;
  std::size_t n = 1;  // sentence length in characters
};

// Pre-processing marks digit runs (interior . , % allowed between digits)
// and Latin-letter runs as weight-0 edges, and every punctuation/whitespace
// character as a weight-0 single-character edge bounded by hard boundaries.
// Automaton matches contribute edges weighted per the decoder model; every
// position lacking a single-character edge gets a fallback edge with
// log(1 / (total_count + 1)). Edges crossing hard boundaries are discarded;
// duplicate (start, end) edges keep the best weight.
SegDag build_dag(std::u32string_view text, const Automaton& ac,
                 Decoder weight_mode = Decoder::kLlaca);

// Maximum-log-probability tiling, left-to-right with backtracking. Ties are
// broken toward the longer final word at each position, then the smaller
// start index.
Segmentation viterbi(const SegDag& dag);

Segmentation segment_llaca(std::u32string_view text, const Automaton& ac);
Segmentation segment_unigram(std::u32string_view text, const Automaton& ac);
// Greedy maximum matching from the left / right; unmatched positions emit
// single characters.
Segmentation segment_fmm(std::u32string_view text, const Automaton& ac);
Segmentation segment_bmm(std::u32string_view text, const Automaton& ac);

Segmentation segment(std::u32string_view text, const Automaton& ac, Decoder d);

// Scores an arbitrary tiling under the variable n-gram measure (the same
// weights segment_llaca decodes with), so different decoders' paths have
// comparable perplexities.
SentenceScore score_spans(std::u32string_view text, std::span<const Span> spans,
                          const Automaton& ac);

// exp(-log_p / n)
double sentence_ppl(const SentenceScore& score);
// Geometric mean across sentences: exp(mean_i(-log_p_i / n_i)).
double corpus_ppl(std::span<const SentenceScore> scores);

// Token strings for a tiling; whitespace-only spans are dropped (they are
// boundaries, not words).
std::vector<std::u32string> spans_to_tokens(std::u32string_view text,
                                            std::span<const Span> spans);

}  // namespace llaca

#endif  // LLACA_SEGMENTER_HPP_
