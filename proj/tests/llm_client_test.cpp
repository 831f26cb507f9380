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
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "llaca/errors.hpp"
#include "llaca/llm_client.hpp"
#include "llaca/unicode.hpp"
#include "test_util.hpp"

using namespace llaca;

namespace {

RawCorpus corpus(std::initializer_list<const char32_t*> sentences) {
  RawCorpus c;
  for (const char32_t* s : sentences) c.sentences.emplace_back(s);
  return c;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("make_batches sizes follow the square-root rule") {
  BatchPlan nine = make_batches(9, 1);
  REQUIRE(nine.batches.size() == 3);
  for (const auto& b : nine.batches) CHECK(b.size() == 3);

  BatchPlan ten = make_batches(10, 1);
  REQUIRE(ten.batches.size() == 3);
  CHECK(ten.batches[0].size() == 4);
  CHECK(ten.batches[1].size() == 4);
  CHECK(ten.batches[2].size() == 2);

  BatchPlan one = make_batches(1, 1);
  REQUIRE(one.batches.size() == 1);
  CHECK(one.batches[0] == std::vector<std::size_t>{0});
}

TEST_CASE("make_batches is deterministic and partitions the corpus") {
  for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
    BatchPlan a = make_batches(57, seed);
    BatchPlan b = make_batches(57, seed);
    CHECK(a.batches == b.batches);

    std::set<std::size_t> seen;
    for (const auto& batch : a.batches) {
      for (std::size_t idx : batch) {
        CHECK(idx < 57);
        CHECK(seen.insert(idx).second);  // each index exactly once
      }
    }
    CHECK(seen.size() == 57);
  }
  CHECK(make_batches(57, 1).batches != make_batches(57, 2).batches);
}

TEST_CASE("fixture replay answers per sentence, empty when missing") {
  Fixture fx;
  fx.add(U"abc", "ab c");
  ClientConfig cfg;
  std::vector<std::u32string> batch = {U"abc", U"zzz"};
  auto lines = request_segmentation(cfg, batch, &fx);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "ab c");
  CHECK(lines[1].empty());
}

TEST_CASE("fixture file parsing") {
  std::ostringstream warn;
  Fixture fx = Fixture::parse(">abc\n<ab c\n# comment\n\n>de\n<d e\n", "mem", &warn);
  CHECK(fx.size() == 2);
  CHECK(*fx.lookup(U"abc") == "ab c");
  CHECK(*fx.lookup(U"de") == "d e");

  // duplicate keys: last entry wins, warning emitted
  std::ostringstream warn2;
  Fixture dup = Fixture::parse(">a\n<a\n>a\n<a !\n", "mem", &warn2);
  CHECK(dup.size() == 1);
  CHECK(*dup.lookup(U"a") == "a !");
  CHECK(warn2.str().find("duplicate") != std::string::npos);

  CHECK_THROWS_AS(Fixture::parse(">a\n>b\n<x\n", "mem"), DataError);
  CHECK_THROWS_AS(Fixture::parse("<x\n", "mem"), DataError);
  CHECK_THROWS_AS(Fixture::parse(">a\n", "mem"), DataError);
  CHECK_THROWS_AS(Fixture::parse("junk\n", "mem"), DataError);
}

TEST_CASE("fixture save/load round trip") {
  Fixture fx;
  fx.add(U"abc", "ab c");
  fx.add(U"武汉", "武 汉");
  auto path = temp_path("llaca_fixture_rt.txt");
  fx.save(path);
  Fixture loaded = Fixture::load(path);
  CHECK(loaded.size() == 2);
  CHECK(*loaded.lookup(U"abc") == "ab c");
  std::remove(path.c_str());
}

TEST_CASE("run_llm_ws with an identity fixture reproduces gold counts") {
  GoldCorpus gold = parse_gold("ab c\nab de\nc de\n", "gold");
  RawCorpus raw = strip_gold(gold);
  Fixture fx;
  fx.add(U"abc", "ab c");
  fx.add(U"abde", "ab de");
  fx.add(U"cde", "c de");
  SuffixIndex index = SuffixIndex::build(raw);
  ClientConfig cfg;
  cfg.seed = 3;

  Vocabulary v = run_llm_ws(cfg, raw, index, 1.0, &fx);
  CHECK(v.find(U"ab")->count == 2);
  CHECK(v.find(U"c")->count == 2);
  CHECK(v.find(U"de")->count == 2);
  CHECK(v.total_count() == 6);
}

TEST_CASE("translated lines are rejected and leave the vocabulary intact") {
  RawCorpus raw;
  Fixture clean, noisy;
  for (int i = 0; i < 30; ++i) {
    std::u32string s = U"αβ";
    s.push_back(static_cast<char32_t>(U'γ' + i));  // distinct per sentence
    raw.sentences.push_back(s);
    std::string seg = utf8_encode(s.substr(0, 2)) + " " + utf8_encode(s.substr(2));
    clean.add(s, seg);
    // every 10th response is a "translation" into a disjoint alphabet
    noisy.add(s, (i % 10 == 9) ? "translated text" : seg);
  }
  SuffixIndex index = SuffixIndex::build(raw);
  ClientConfig cfg;

  std::ostringstream log;
  SampleResult sampled = sample_corpus(cfg, raw, &noisy, &log);
  CHECK(sampled.rejected == 3);
  CHECK(sampled.accepted == 27);
  CHECK(log.str().find("rejected") != std::string::npos);

  Vocabulary from_noisy = run_llm_ws(cfg, raw, index, 1.0, &noisy);
  Vocabulary from_clean = run_llm_ws(cfg, raw, index, 1.0, &clean);
  // rejected lines contribute nothing: the shared word keeps 27 of 30 counts,
  // the three dropped sentences' unique tail characters disappear entirely
  CHECK(from_clean.find(U"αβ")->count == 30);
  CHECK(from_noisy.find(U"αβ")->count == 27);
  CHECK(from_noisy.size() == from_clean.size() - 3);
  CHECK(from_noisy.total_count() == from_clean.total_count() - 2 * 3);
  for (const auto& [word, entry] : from_noisy.entries()) {
    (void)entry;
    CHECK(from_clean.find(word) != nullptr);
  }
}

TEST_CASE("concatenation-preserving wrong splits are accepted") {
  RawCorpus raw = corpus({U"αβγ"});
  Fixture fx;
  fx.add(U"αβγ", utf8_encode(U"αβ") + " " + utf8_encode(U"γ"));
  SuffixIndex index = SuffixIndex::build(raw);
  ClientConfig cfg;
  Vocabulary v = run_llm_ws(cfg, raw, index, 1.0, &fx);
  CHECK(v.find(U"αβ") != nullptr);  // accepted: PMI governs retention
}

TEST_CASE("empty fixture yields an upstream error") {
  RawCorpus raw = corpus({U"abc"});
  SuffixIndex index = SuffixIndex::build(raw);
  Fixture fx;
  ClientConfig cfg;
  CHECK_THROWS_AS(run_llm_ws(cfg, raw, index, 0.99, &fx), UpstreamError);
}

TEST_CASE("pipeline determinism: fixed seed and fixture give identical TSVs") {
  GoldCorpus gold = parse_gold("ab c\nde f\ngh i\nab f\n", "gold");
  RawCorpus raw = strip_gold(gold);
  Fixture fx;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    std::string line;
    for (std::size_t k = 0; k < gold.sentences[i].size(); ++k) {
      if (k) line += ' ';
      line += utf8_encode(gold.sentences[i][k]);
    }
    fx.add(raw.sentences[i], line);
  }
  SuffixIndex index = SuffixIndex::build(raw);
  ClientConfig cfg;
  cfg.seed = 99;
  cfg.concurrency = 3;

  auto path1 = temp_path("llaca_det_1.tsv");
  auto path2 = temp_path("llaca_det_2.tsv");
  save_tsv(run_llm_ws(cfg, raw, index, 0.99, &fx), path1);
  save_tsv(run_llm_ws(cfg, raw, index, 0.99, &fx), path2);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(path1) == slurp(path2));
  CHECK(!slurp(path1).empty());
  std::remove(path1.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("rejection safety: totals equal the accepted lines' token counts") {
  RawCorpus raw = corpus({U"αβ", U"γδ"});
  Fixture fx;
  fx.add(U"αβ", utf8_encode(U"α") + " " + utf8_encode(U"β"));
  fx.add(U"γδ", "wrong translation");
  SuffixIndex index = SuffixIndex::build(raw);
  ClientConfig cfg;
  Vocabulary v = run_llm_ws(cfg, raw, index, 1.0, &fx);
  CHECK(v.total_count() == 2);  // only the accepted line's two tokens
}

TEST_CASE("prompt template validation") {
  ClientConfig cfg;
  CHECK_NOTHROW(validate_prompt_template(kDefaultPrompt));
  CHECK_THROWS_AS(validate_prompt_template("no slot"), ConfigError);
  CHECK_THROWS_AS(validate_prompt_template("{TEXT} and {TEXT}"), ConfigError);
}

TEST_CASE("chat-completions wire protocol against a loopback server") {
  httplib::Server server;
  std::string seen_auth, seen_model;
  server.Post("/v1/chat/completions",
              [&](const httplib::Request& req, httplib::Response& res) {
                auto body = nlohmann::json::parse(req.body);
                seen_model = body.at("model").get<std::string>();
                if (req.has_header("Authorization")) {
                  seen_auth = req.get_header_value("Authorization");
                }
                std::string prompt =
                    body.at("messages").at(0).at("content").get<std::string>();
                // echo each line with a space after the first UTF-8 character
                std::string out;
                std::istringstream in(prompt);
                std::string line;
                while (std::getline(in, line)) {
                  std::u32string u = utf8_decode(line);
                  if (!out.empty()) out += "\n";
                  out += utf8_encode(u.substr(0, 1)) + " " + utf8_encode(u.substr(1));
                }
                nlohmann::json reply = {
                    {"choices",
                     {{{"message", {{"role", "assistant"}, {"content", out}}}}}}};
                res.set_content(reply.dump(), "application/json");
              });
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  setenv("LLACA_API_KEY", "sk-test-123", 1);
  ClientConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port);
  cfg.model = "test-model";
  cfg.prompt_template = "{TEXT}";
  cfg.max_retries = 0;
  std::vector<std::u32string> batch = {U"abc", U"de"};
  auto lines = request_segmentation(cfg, batch);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "a bc");
  CHECK(lines[1] == "d e");
  CHECK(seen_model == "test-model");
  CHECK(seen_auth == "Bearer sk-test-123");
  unsetenv("LLACA_API_KEY");

  server.stop();
  runner.join();
}

TEST_CASE("HTTP failures yield empty lines, short responses are padded") {
  httplib::Server server;
  int calls = 0;
  server.Post("/v1/chat/completions",
              [&](const httplib::Request&, httplib::Response& res) {
                ++calls;
                if (calls <= 1) {
                  res.status = 500;
                  return;
                }
                nlohmann::json reply = {
                    {"choices",
                     {{{"message", {{"role", "assistant"}, {"content", "only one"}}}}}}};
                res.set_content(reply.dump(), "application/json");
              });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ClientConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port);
  cfg.prompt_template = "{TEXT}";
  cfg.max_retries = 1;  // first attempt 500s, retry succeeds
  std::vector<std::u32string> batch = {U"abc", U"de"};
  auto lines = request_segmentation(cfg, batch);
  CHECK(calls == 2);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "only one");
  CHECK(lines[1].empty());  // padded

  server.stop();
  runner.join();
}

TEST_CASE("unreachable endpoints reject the whole batch") {
  ClientConfig cfg;
  cfg.endpoint = "http://127.0.0.1:1";  // nothing listens there
  cfg.prompt_template = "{TEXT}";
  cfg.max_retries = 0;
  cfg.timeout_s = 1.0;
  std::vector<std::u32string> batch = {U"abc"};
  auto lines = request_segmentation(cfg, batch);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].empty());
}

TEST_CASE("record mode captures responses for later replay") {
  GoldCorpus gold = parse_gold("ab c\nd e\n", "gold");
  RawCorpus raw = strip_gold(gold);
  Fixture source;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    std::string line;
    for (std::size_t k = 0; k < gold.sentences[i].size(); ++k) {
      if (k) line += ' ';
      line += utf8_encode(gold.sentences[i][k]);
    }
    source.add(raw.sentences[i], line);
  }
  ClientConfig cfg;
  Fixture recorded;
  sample_corpus(cfg, raw, &source, nullptr, &recorded);
  CHECK(recorded.size() == 2);

  SuffixIndex index = SuffixIndex::build(raw);
  Vocabulary a = run_llm_ws(cfg, raw, index, 1.0, &source);
  Vocabulary b = run_llm_ws(cfg, raw, index, 1.0, &recorded);
  CHECK(a.size() == b.size());
  CHECK(a.total_count() == b.total_count());
}

TEST_CASE("per-batch filtering is available as a switch") {
  GoldCorpus gold = parse_gold("ab c\nab c\nab c\nab c\n", "gold");
  RawCorpus raw = strip_gold(gold);
  Fixture fx;
  fx.add(U"abc", "ab c");
  SuffixIndex index = SuffixIndex::build(raw);
  ClientConfig cfg;
  Vocabulary pooled = run_llm_ws(cfg, raw, index, 1.0, &fx, /*filter_per_batch=*/false);
  Vocabulary per_batch = run_llm_ws(cfg, raw, index, 1.0, &fx, /*filter_per_batch=*/true);
  // identical corpus-wide counts either way on a noiseless fixture
  CHECK(pooled.total_count() == per_batch.total_count());
  CHECK(pooled.size() == per_batch.size());
}
