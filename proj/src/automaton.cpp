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

#include "llaca/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "llaca/errors.hpp"
#include "llaca/unicode.hpp"

namespace llaca {

namespace {

std::uint32_t lookup_edge(const AcNode& node, char32_t c) {
  auto it = std::lower_bound(node.edges.begin(), node.edges.end(), c,
                             [](const auto& e, char32_t ch) { return e.first < ch; });
  if (it != node.edges.end() && it->first == c) return it->second;
  return Automaton::kNone;
}

}  // namespace

std::uint32_t Automaton::child(std::uint32_t state, char32_t c) const {
  return lookup_edge(nodes_[state], c);
}

Automaton Automaton::build(const Vocabulary& vocab) {
  Automaton ac;
  auto& nodes = ac.nodes_;
  nodes.emplace_back();
  nodes[kRoot].is_final = true;  // the root represents the empty word

  // Trie insertion in code-point order for a deterministic arena layout.
  for (const VocabEntry* entry : vocab.sorted_entries()) {
    std::uint32_t cur = kRoot;
    for (char32_t c : entry->word) {
      std::uint32_t nxt = lookup_edge(nodes[cur], c);
      if (nxt == kNone) {
        nxt = static_cast<std::uint32_t>(nodes.size());
        nodes.emplace_back();
        nodes[nxt].depth = nodes[cur].depth + 1;
        auto& edges = nodes[cur].edges;
        auto it = std::lower_bound(edges.begin(), edges.end(), c,
                                   [](const auto& e, char32_t ch) { return e.first < ch; });
        edges.insert(it, {c, nxt});
      }
      cur = nxt;
    }
    nodes[cur].is_final = true;
    nodes[cur].count = entry->count;
    ac.word_index_.emplace(entry->word, cur);
    ac.max_word_len_ = std::max(ac.max_word_len_, entry->word.size());
  }

  // BFS: fail links, prev-final links, output links.
  std::vector<std::uint32_t> order;
  order.reserve(nodes.size());
  nodes[kRoot].fail = kRoot;
  nodes[kRoot].prev_final = kRoot;
  nodes[kRoot].output_link = kNone;
  std::queue<std::uint32_t> bfs;
  for (auto [c, v] : nodes[kRoot].edges) {
    (void)c;
    nodes[v].fail = kRoot;
    nodes[v].prev_final = kRoot;
    bfs.push(v);
  }
  while (!bfs.empty()) {
    std::uint32_t u = bfs.front();
    bfs.pop();
    order.push_back(u);
    // output link: nearest non-root final reached through the fail chain
    std::uint32_t f = nodes[u].fail;
    nodes[u].output_link =
        (nodes[f].is_final && f != kRoot) ? f : nodes[f].output_link;
    for (auto [c, v] : nodes[u].edges) {
      // fail(v): walk u's fail chain until a node with a real edge on c
      std::uint32_t w = nodes[u].fail;
      while (w != kRoot && lookup_edge(nodes[w], c) == kNone) w = nodes[w].fail;
      std::uint32_t t = lookup_edge(nodes[w], c);
      nodes[v].fail = (t == kNone || t == v) ? kRoot : t;
      nodes[v].prev_final = nodes[u].is_final ? u : nodes[u].prev_final;
      bfs.push(v);
    }
  }

  // Subtree sums by reverse-BFS accumulation (children before parents).
  for (std::uint32_t id = 0; id < nodes.size(); ++id) {
    nodes[id].subtree_sum = nodes[id].count;
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::uint64_t sum = nodes[*it].subtree_sum;
    for (auto [c, v] : nodes[*it].edges) {
      (void)c;
      sum += nodes[v].subtree_sum;
    }
    nodes[*it].subtree_sum = sum;
  }
  {
    std::uint64_t root_sum = nodes[kRoot].count;
    for (auto [c, v] : nodes[kRoot].edges) {
      (void)c;
      root_sum += nodes[v].subtree_sum;
    }
    nodes[kRoot].subtree_sum = root_sum;
  }

  // Eq.-style probabilities, cached per final node.
  for (std::uint32_t id = 1; id < nodes.size(); ++id) {
    if (!nodes[id].is_final) continue;
    const auto denom = nodes[nodes[id].prev_final].subtree_sum;
    nodes[id].log_prob =
        std::log(static_cast<double>(nodes[id].count) / static_cast<double>(denom));
    nodes[id].log_prob_unigram =
        std::log(static_cast<double>(nodes[id].count) /
                 static_cast<double>(nodes[kRoot].subtree_sum));
  }
  return ac;
}

double Automaton::word_prob(std::u32string_view word) const {
  std::uint32_t id = find_word(word);
  if (id == kNone) {
    throw Error("word_prob: not in vocabulary: " + utf8_encode(word));
  }
  const AcNode& n = nodes_[id];
  return static_cast<double>(n.count) /
         static_cast<double>(nodes_[n.prev_final].subtree_sum);
}

std::uint32_t Automaton::find_word(std::u32string_view word) const {
  auto it = word_index_.find(std::u32string(word));
  return it == word_index_.end() ? kNone : it->second;
}

std::uint32_t Automaton::next_state(std::uint32_t state, char32_t c) const {
  for (;;) {
    std::uint32_t t = child(state, c);
    if (t != kNone) return t;
    if (state == kRoot) return kRoot;
    state = nodes_[state].fail;
  }
}

void Automaton::scan(std::u32string_view text,
                     const std::function<void(const AcMatch&)>& emit) const {
  std::uint32_t state = kRoot;
  for (std::size_t i = 0; i < text.size(); ++i) {
    state = next_state(state, text[i]);
    std::uint32_t hit =
        (nodes_[state].is_final && state != kRoot) ? state : nodes_[state].output_link;
    while (hit != kNone) {
      emit(AcMatch{i + 1, nodes_[hit].depth, hit});
      hit = nodes_[hit].output_link;
    }
  }
}

std::vector<AcMatch> Automaton::scan(std::u32string_view text) const {
  std::vector<AcMatch> matches;
  scan(text, [&](const AcMatch& m) { matches.push_back(m); });
  return matches;
}

std::size_t Automaton::longest_prefix_word(std::u32string_view text) const {
  std::uint32_t cur = kRoot;
  std::size_t best = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    cur = child(cur, text[i]);
    if (cur == kNone) break;
    if (nodes_[cur].is_final) best = i + 1;
  }
  return best;
}

}  // namespace llaca
