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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "llaca/errors.hpp"
#include "llaca/vocab.hpp"
#include "test_util.hpp"

using namespace llaca;
using llaca::testing::Rng;

namespace {

RawCorpus corpus(std::initializer_list<const char32_t*> sentences) {
  RawCorpus c;
  for (const char32_t* s : sentences) c.sentences.emplace_back(s);
  return c;
}

std::vector<std::string> lines(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}

}  // namespace

TEST_CASE("parse_llm_lines accepts exactly character-identical lines") {
  RawCorpus raw = corpus({U"abc"});

  auto ok = parse_llm_lines(raw.sentences, lines({"ab c"}));
  REQUIRE(ok.accepted.size() == 1);
  CHECK(ok.accepted[0] == testing::tokens({U"ab", U"c"}));
  CHECK(ok.rejected == 0);

  auto substituted = parse_llm_lines(raw.sentences, lines({"ab d"}));
  CHECK(substituted.accepted.empty());
  CHECK(substituted.rejected == 1);

  auto extra = parse_llm_lines(raw.sentences, lines({"a b c d"}));
  CHECK(extra.accepted.empty());
  CHECK(extra.rejected == 1);
}

TEST_CASE("parse_llm_lines pads missing lines and rejects chatter") {
  RawCorpus raw = corpus({U"abc", U"de"});
  auto r = parse_llm_lines(raw.sentences, lines({"a bc"}));
  CHECK(r.accepted.size() == 1);
  CHECK(r.rejected == 1);  // missing second line

  auto chatter = parse_llm_lines(raw.sentences, lines({"Here is the result:", "d e"}));
  CHECK(chatter.accepted.size() == 1);
  CHECK(chatter.accepted[0] == testing::tokens({U"d", U"e"}));
  CHECK(chatter.rejected == 1);
}

TEST_CASE("parse_llm_lines rejects invalid UTF-8 output") {
  RawCorpus raw = corpus({U"ab"});
  std::vector<std::string> bad = {std::string("a\xFF b")};
  auto r = parse_llm_lines(raw.sentences, bad);
  CHECK(r.accepted.empty());
  CHECK(r.rejected == 1);
}

TEST_CASE("count_words multiplicities") {
  Vocabulary v = count_words({testing::tokens({U"a", U"b"}), testing::tokens({U"a"})});
  CHECK(v.size() == 2);
  CHECK(v.find(U"a")->count == 2);
  CHECK(v.find(U"b")->count == 1);
  CHECK(v.total_count() == 3);

  CHECK(count_words({}).empty());

  Vocabulary dup = count_words({testing::tokens({U"ab", U"ab"})});
  CHECK(dup.find(U"ab")->count == 2);
}

TEST_CASE("pmi_filter drops unattested words and keeps singles") {
  // corpus: "xyxy" twice; vocabulary contains a hallucinated word "qq"
  RawCorpus raw = corpus({U"xyxy", U"xyxy"});
  SuffixIndex index = SuffixIndex::build(raw);
  Vocabulary v;
  v.add(U"xy", 4);
  v.add(U"x", 2);
  v.add(U"qq", 3);  // not in the corpus: dropped regardless of ratio

  Vocabulary kept = pmi_filter(v, index, 1.0);
  CHECK(kept.find(U"xy") != nullptr);
  CHECK(kept.find(U"x") != nullptr);
  CHECK(kept.find(U"qq") == nullptr);
  CHECK(kept.find(U"xy")->pmi.has_value());

  CHECK_THROWS_AS(pmi_filter(v, index, 0.0), ConfigError);
  CHECK_THROWS_AS(pmi_filter(v, index, 1.5), ConfigError);
}

TEST_CASE("pmi_filter keeps ceil(ratio * M) ranked entries") {
  // Build a corpus where ten two-char words all occur, with varying PMI.
  RawCorpus raw;
  std::u32string big;
  for (char32_t a = U'a'; a <= U'j'; ++a) {
    std::u32string w;
    w.push_back(a);
    w.push_back(static_cast<char32_t>(a + 10));
    // more repetitions for earlier words: higher p(w), higher PMI
    for (char32_t r = 0; r < (U'j' - a) + 1; ++r) raw.sentences.push_back(w);
  }
  SuffixIndex index = SuffixIndex::build(raw);
  Vocabulary v;
  for (char32_t a = U'a'; a <= U'j'; ++a) {
    std::u32string w;
    w.push_back(a);
    w.push_back(static_cast<char32_t>(a + 10));
    v.add(w, 1);
  }
  // 10 finite-PMI words, ratio 0.99 -> ceil(9.9) = 10 kept
  CHECK(pmi_filter(v, index, 0.99).size() == 10);
  CHECK(pmi_filter(v, index, 0.5).size() == 5);
  CHECK(pmi_filter(v, index, 0.05).size() == 1);
}

TEST_CASE("pmi_filter is monotone in top_ratio and never drops corpus singles") {
  Rng rng{11};
  RawCorpus raw;
  for (int i = 0; i < 30; ++i) {
    std::u32string s;
    for (int k = 0; k < 8; ++k) s.push_back(static_cast<char32_t>(U'a' + rng.below(5)));
    raw.sentences.push_back(std::move(s));
  }
  SuffixIndex index = SuffixIndex::build(raw);
  Vocabulary v;
  for (const auto& s : raw.sentences) {
    v.add(s.substr(0, 2));
    v.add(s.substr(2, 3));
    v.add(s.substr(5, 1));
  }
  std::vector<double> ratios = {0.1, 0.3, 0.5, 0.8, 1.0};
  Vocabulary prev;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    Vocabulary cur = pmi_filter(v, index, ratios[i]);
    if (i > 0) {
      for (const auto& [word, entry] : prev.entries()) {
        (void)entry;
        CHECK(cur.find(word) != nullptr);  // raising the ratio keeps everything
      }
    }
    prev = cur;
    for (const auto& [word, entry] : v.entries()) {
      (void)entry;
      if (word.size() == 1 && index.occurrences(word) > 0) {
        CHECK(cur.find(word) != nullptr);
      }
    }
  }
}

TEST_CASE("merge sums counts and clears pmi") {
  Vocabulary a;
  a.add(U"a", 1);
  Vocabulary b;
  b.add(U"a", 2);
  b.add(U"b", 1);

  Vocabulary m = merge(a, b);
  CHECK(m.find(U"a")->count == 3);
  CHECK(m.find(U"b")->count == 1);
  CHECK(m.total_count() == 4);
  CHECK(!m.find(U"a")->pmi.has_value());

  Vocabulary id = merge(a, Vocabulary{});
  CHECK(id.find(U"a")->count == 1);
  CHECK(id.size() == a.size());

  Vocabulary ba = merge(b, a);
  CHECK(ba.find(U"a")->count == m.find(U"a")->count);
  CHECK(ba.find(U"b")->count == m.find(U"b")->count);
}

TEST_CASE("merge-then-count equals counting concatenated lists") {
  Rng rng{5};
  for (int round = 0; round < 50; ++round) {
    std::vector<std::vector<std::u32string>> lists_a, lists_b;
    auto gen = [&](std::vector<std::vector<std::u32string>>& out) {
      std::size_t lines = rng.below(5);
      for (std::size_t i = 0; i < lines; ++i) {
        std::vector<std::u32string> toks;
        std::size_t n = 1 + rng.below(6);
        for (std::size_t k = 0; k < n; ++k) {
          std::u32string w;
          std::size_t len = 1 + rng.below(3);
          for (std::size_t j = 0; j < len; ++j) {
            w.push_back(static_cast<char32_t>(U'a' + rng.below(4)));
          }
          toks.push_back(std::move(w));
        }
        out.push_back(std::move(toks));
      }
    };
    gen(lists_a);
    gen(lists_b);
    Vocabulary merged = merge(count_words(lists_a), count_words(lists_b));
    std::vector<std::vector<std::u32string>> both = lists_a;
    both.insert(both.end(), lists_b.begin(), lists_b.end());
    Vocabulary direct = count_words(both);
    CHECK(merged.size() == direct.size());
    CHECK(merged.total_count() == direct.total_count());
    for (const auto& [word, entry] : direct.entries()) {
      REQUIRE(merged.find(word) != nullptr);
      CHECK(merged.find(word)->count == entry.count);
    }
  }
}

TEST_CASE("tsv round trip") {
  auto path = (std::filesystem::temp_directory_path() / "llaca_vocab_rt.tsv").string();

  Vocabulary v;
  v.add(U"ab", 2);
  save_tsv(v, path);
  {
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    CHECK(content == "ab\t2\n");
  }

  Rng rng{91};
  for (int round = 0; round < 20; ++round) {
    Vocabulary random;
    std::size_t n = 1 + rng.below(20);
    for (std::size_t i = 0; i < n; ++i) {
      std::u32string w;
      std::size_t len = 1 + rng.below(4);
      for (std::size_t k = 0; k < len; ++k) {
        w.push_back(static_cast<char32_t>(0x4E00 + rng.below(40)));
      }
      random.add(w, 1 + rng.below(100));
    }
    save_tsv(random, path);
    Vocabulary loaded = load_tsv(path);
    CHECK(loaded.size() == random.size());
    CHECK(loaded.total_count() == random.total_count());
    for (const auto& [word, entry] : random.entries()) {
      REQUIRE(loaded.find(word) != nullptr);
      CHECK(loaded.find(word)->count == entry.count);
    }
  }
  std::remove(path.c_str());
}

TEST_CASE("tsv load sums duplicates, skips comments, reports bad lines") {
  Vocabulary v = parse_tsv("# comment\nab\t2\nab\t3\ncd\t1\n", "mem");
  CHECK(v.find(U"ab")->count == 5);
  CHECK(v.find(U"cd")->count == 1);

  try {
    parse_tsv("ok\t1\nbroken line\n", "mem");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_tsv("ab\tx2\n", "mem"), DataError);
  CHECK_THROWS_AS(parse_tsv("ab\t0\n", "mem"), DataError);
  CHECK_THROWS_AS(parse_tsv("\t3\n", "mem"), DataError);
}
