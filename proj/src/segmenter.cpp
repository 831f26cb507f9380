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

#include "llaca/segmenter.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "llaca/errors.hpp"
#include "llaca/unicode.hpp"

namespace llaca {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_digit_separator(char32_t c) { return c == U'.' || c == U',' || c == U'%'; }

struct DagBuilder {
  explicit DagBuilder(std::size_t length) : dag{length, {}, {}} {
    dag.edges.assign(length + 1, {});
    dag.hard_boundary.assign(length + 1, 0);
    covered_single.assign(length, false);
  }

  void add_edge(std::size_t start, std::size_t end, double log_prob) {
    auto& list = dag.edges[end];
    for (auto& e : list) {
      if (e.start == start) {  // duplicate span: keep the best weight
        e.log_prob = std::max(e.log_prob, log_prob);
        return;
      }
    }
    list.push_back({start, log_prob});
    if (end - start == 1) covered_single[start] = true;
  }

  SegDag dag;
  std::vector<bool> covered_single;
};

}  // namespace

Decoder decoder_from_name(const std::string& name) {
  if (name == "llaca") return Decoder::kLlaca;
  if (name == "uni") return Decoder::kUnigram;
  if (name == "fmm") return Decoder::kFmm;
  if (name == "bmm") return Decoder::kBmm;
  throw ConfigError("unknown decoder: " + name + " (expected llaca|uni|fmm|bmm)");
}

const char* decoder_name(Decoder d) {
  switch (d) {
    case Decoder::kLlaca: return "llaca";
    case Decoder::kUnigram: return "uni";
    case Decoder::kFmm: return "fmm";
    case Decoder::kBmm: return "bmm";
  }
  return "?";
}

SegDag build_dag(std::u32string_view text, const Automaton& ac, Decoder weight_mode) {
  assert(!text.empty());
  const std::size_t n = text.size();
  DagBuilder b(n);

  // Pass 1: normal patterns (numbers, Latin runs) and punctuation/whitespace.
  std::size_t i = 0;
  while (i < n) {
    const char32_t c = text[i];
    if (is_ascii_digit(c)) {
      std::size_t j = i + 1;
      while (j < n) {
        if (is_ascii_digit(text[j])) {
          ++j;
        } else if (is_digit_separator(text[j]) && j + 1 < n && is_ascii_digit(text[j + 1])) {
          j += 2;
        } else {
          break;
        }
      }
      b.add_edge(i, j, 0.0);
      i = j;
    } else if (is_latin_letter(c)) {
      std::size_t j = i + 1;
      while (j < n && is_latin_letter(text[j])) ++j;
      b.add_edge(i, j, 0.0);
      i = j;
    } else if (is_space(c) || is_punct(c)) {
      b.dag.hard_boundary[i] = 1;
      b.dag.hard_boundary[i + 1] = 1;
      b.add_edge(i, i + 1, 0.0);
      ++i;
    } else {
      ++i;
    }
  }

  // Prefix sums for O(1) "does (s, e) cross a hard boundary" checks.
  std::vector<std::uint32_t> pref(n + 2, 0);
  for (std::size_t p = 0; p <= n; ++p) {
    pref[p + 1] = pref[p] + (b.dag.hard_boundary[p] ? 1u : 0u);
  }
  auto crosses = [&](std::size_t s, std::size_t e) {
    // boundaries strictly inside (s, e): positions s+1 .. e-1
    return e > s + 1 && pref[e] - pref[s + 1] > 0;
  };

  // Pass 2: vocabulary matches.
  ac.scan(text, [&](const AcMatch& m) {
    const std::size_t s = m.end - m.len;
    if (crosses(s, m.end)) return;
    const AcNode& node = ac.node(m.node);
    const double w =
        weight_mode == Decoder::kUnigram ? node.log_prob_unigram : node.log_prob;
    b.add_edge(s, m.end, w);
  });

  // Pass 3: single-character fallbacks keep the DAG connected.
  const double fallback = std::log(1.0 / (static_cast<double>(ac.total_count()) + 1.0));
  for (std::size_t p = 0; p < n; ++p) {
    if (!b.covered_single[p]) b.add_edge(p, p + 1, fallback);
  }

  // Deterministic edge order (by start) for reproducible decoding.
  for (auto& list : b.dag.edges) {
    std::sort(list.begin(), list.end(),
              [](const DagEdge& x, const DagEdge& y) { return x.start < y.start; });
  }
  return std::move(b.dag);
}

Segmentation viterbi(const SegDag& dag) {
  const std::size_t n = dag.length;
  std::vector<double> best(n + 1, kNegInf);
  std::vector<std::size_t> pred(n + 1, SIZE_MAX);
  best[0] = 0.0;
  for (std::size_t e = 1; e <= n; ++e) {
    for (const DagEdge& edge : dag.edges[e]) {
      if (best[edge.start] == kNegInf) continue;
      const double cand = best[edge.start] + edge.log_prob;
      // Ties prefer the longer final word (the smaller start).
      if (cand > best[e] || (cand == best[e] && edge.start < pred[e])) {
        best[e] = cand;
        pred[e] = edge.start;
      }
    }
  }
  if (n > 0 && best[n] == kNegInf) {
    throw Error("viterbi: segmentation DAG is disconnected (construction bug)");
  }
  Segmentation seg;
  seg.score = n > 0 ? best[n] : 0.0;
  for (std::size_t e = n; e > 0; e = pred[e]) {
    seg.spans.push_back({pred[e], e});
  }
  std::reverse(seg.spans.begin(), seg.spans.end());
  return seg;
}

Segmentation segment_llaca(std::u32string_view text, const Automaton& ac) {
  return viterbi(build_dag(text, ac, Decoder::kLlaca));
}

Segmentation segment_unigram(std::u32string_view text, const Automaton& ac) {
  return viterbi(build_dag(text, ac, Decoder::kUnigram));
}

Segmentation segment_fmm(std::u32string_view text, const Automaton& ac) {
  Segmentation seg;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = ac.longest_prefix_word(text.substr(i));
    if (len == 0) len = 1;
    seg.spans.push_back({i, i + len});
    i += len;
  }
  return seg;
}

Segmentation segment_bmm(std::u32string_view text, const Automaton& ac) {
  Segmentation seg;
  std::size_t j = text.size();
  while (j > 0) {
    std::size_t len = 1;
    const std::size_t cap = std::min(ac.max_word_len(), j);
    for (std::size_t l = cap; l >= 2; --l) {
      if (ac.contains(text.substr(j - l, l))) {
        len = l;
        break;
      }
    }
    seg.spans.push_back({j - len, j});
    j -= len;
  }
  std::reverse(seg.spans.begin(), seg.spans.end());
  return seg;
}

Segmentation segment(std::u32string_view text, const Automaton& ac, Decoder d) {
  switch (d) {
    case Decoder::kLlaca: return segment_llaca(text, ac);
    case Decoder::kUnigram: return segment_unigram(text, ac);
    case Decoder::kFmm: return segment_fmm(text, ac);
    case Decoder::kBmm: return segment_bmm(text, ac);
  }
  throw ConfigError("unknown decoder");
}

SentenceScore score_spans(std::u32string_view text, std::span<const Span> spans,
                          const Automaton& ac) {
  // Greedy decoders can pick spans the DAG discarded (e.g. a word crossing
  // punctuation), so score against the DAG where possible and fall back to
  // per-character weights otherwise.
  SegDag dag = build_dag(text, ac, Decoder::kLlaca);
  const double fallback = std::log(1.0 / (static_cast<double>(ac.total_count()) + 1.0));
  double total = 0.0;
  for (const Span& sp : spans) {
    const DagEdge* hit = nullptr;
    for (const DagEdge& e : dag.edges[sp.end]) {
      if (e.start == sp.start) {
        hit = &e;
        break;
      }
    }
    if (hit != nullptr) {
      total += hit->log_prob;
    } else if (std::uint32_t id = ac.find_word(text.substr(sp.start, sp.end - sp.start));
               id != Automaton::kNone) {
      total += ac.node(id).log_prob;
    } else {
      total += fallback * static_cast<double>(sp.end - sp.start);
    }
  }
  return SentenceScore{total, text.size()};
}

double sentence_ppl(const SentenceScore& score) {
  return std::exp(-score.log_p / static_cast<double>(score.n));
}

double corpus_ppl(std::span<const SentenceScore> scores) {
  if (scores.empty()) throw Error("corpus_ppl: empty sentence list");
  double acc = 0.0;
  for (const SentenceScore& s : scores) {
    acc += -s.log_p / static_cast<double>(s.n);
  }
  return std::exp(acc / static_cast<double>(scores.size()));
}

std::vector<std::u32string> spans_to_tokens(std::u32string_view text,
                                            std::span<const Span> spans) {
  std::vector<std::u32string> tokens;
  tokens.reserve(spans.size());
  for (const Span& sp : spans) {
    std::u32string_view piece = text.substr(sp.start, sp.end - sp.start);
    bool all_space = true;
    for (char32_t c : piece) {
      if (!is_space(c)) {
        all_space = false;
        break;
      }
    }
    if (!all_space) tokens.emplace_back(piece);
  }
  return tokens;
}

}  // namespace llaca
