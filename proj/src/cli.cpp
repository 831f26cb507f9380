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

#include "llaca/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "llaca/errors.hpp"
#include "llaca/eval.hpp"
#include "llaca/unicode.hpp"

namespace llaca {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

// Sample lines file: one line per corpus sentence, empty line = rejected.
std::vector<std::string> load_sample_lines(const std::string& path) {
  std::string text = read_text_file(path);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line =
        (nl == std::string::npos) ? text.substr(pos) : text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return lines;
}

RawCorpus load_raw_input(const RunConfig& cfg) {
  if (!cfg.raw.empty()) return load_raw(cfg.raw);
  if (!cfg.gold.empty()) return strip_gold(load_gold(cfg.gold));
  throw ConfigError("no input: set raw= (or gold= to segment the stripped gold)");
}

std::string require(const std::string& value, const char* what) {
  if (value.empty()) throw ConfigError(std::string("missing required path: ") + what);
  return value;
}

GoldCorpus tokens_to_gold(std::vector<std::vector<std::u32string>> sentences,
                          std::string id) {
  GoldCorpus out;
  out.id = std::move(id);
  out.spans.reserve(sentences.size());
  for (const auto& toks : sentences) out.spans.push_back(spans_of(toks));
  out.sentences = std::move(sentences);
  return out;
}

struct DecodedCorpus {
  GoldCorpus tokens;
  std::vector<SentenceScore> scores;  // under the variable n-gram measure
};

DecodedCorpus decode_corpus(const RawCorpus& raw, const Automaton& ac, Decoder decoder) {
  DecodedCorpus out;
  std::vector<std::vector<std::u32string>> token_lists;
  token_lists.reserve(raw.sentences.size());
  out.scores.reserve(raw.sentences.size());
  for (const auto& sentence : raw.sentences) {
    if (sentence.empty()) {
      token_lists.emplace_back();
      out.scores.push_back({0.0, 1});
      continue;
    }
    Segmentation seg = segment(sentence, ac, decoder);
    out.scores.push_back(score_spans(sentence, seg.spans, ac));
    token_lists.push_back(spans_to_tokens(sentence, seg.spans));
  }
  out.tokens = tokens_to_gold(std::move(token_lists), raw.id);
  return out;
}

void write_segmented(const GoldCorpus& tokens, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write output: " + path);
  for (const auto& sentence : tokens.sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i) out << ' ';
      out << utf8_encode(sentence[i]);
    }
    out << '\n';
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    std::size_t comma = value.find(',', pos);
    std::string item = (comma == std::string::npos) ? value.substr(pos)
                                                    : value.substr(pos, comma - pos);
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Counts pooled across one or more sample files (each aligned to the raw
// corpus), then PMI-filtered once.
Vocabulary samples_to_vocab(const RunConfig& cfg, const RawCorpus& raw) {
  Vocabulary counts;
  for (const std::string& path : split_list(require(cfg.samples, "samples"))) {
    auto parsed = parse_llm_lines(raw.sentences, load_sample_lines(path));
    counts = merge(counts, count_words(parsed.accepted));
  }
  if (counts.empty()) {
    throw DataError("vocab: no sampled line survived validation");
  }
  SuffixIndex index = SuffixIndex::build(raw);
  return pmi_filter(counts, index, cfg.top_ratio);
}

}  // namespace

void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto as_double = [&](const char* what) {
    try {
      return std::stod(value);
    } catch (...) {
      throw ConfigError(std::string(what) + ": not a number: " + value);
    }
  };
  auto as_int = [&](const char* what) {
    try {
      return std::stoll(value);
    } catch (...) {
      throw ConfigError(std::string(what) + ": not an integer: " + value);
    }
  };
  if (key == "raw") cfg.raw = value;
  else if (key == "gold") cfg.gold = value;
  else if (key == "samples") cfg.samples = value;
  else if (key == "vocab") cfg.vocab = value;
  else if (key == "output") cfg.output = value;
  else if (key == "fixture") cfg.fixture = value;
  else if (key == "record") cfg.record = value;
  else if (key == "diff") cfg.diff = value;
  else if (key == "endpoint") cfg.client.endpoint = value;
  else if (key == "model") cfg.client.model = value;
  else if (key == "prompt") {
    std::string prompt;
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (value[i] == '\\' && i + 1 < value.size() && value[i + 1] == 'n') {
        prompt.push_back('\n');
        ++i;
      } else {
        prompt.push_back(value[i]);
      }
    }
    cfg.client.prompt_template = prompt;
  } else if (key == "temperature") cfg.client.temperature = as_double("temperature");
  else if (key == "max_retries") cfg.client.max_retries = static_cast<int>(as_int("max_retries"));
  else if (key == "timeout") cfg.client.timeout_s = as_double("timeout");
  else if (key == "seed") cfg.client.seed = static_cast<std::uint64_t>(as_int("seed"));
  else if (key == "concurrency") cfg.client.concurrency = static_cast<int>(as_int("concurrency"));
  else if (key == "top_ratio") cfg.top_ratio = as_double("top_ratio");
  else if (key == "iterations") cfg.iterations = static_cast<int>(as_int("iterations"));
  else if (key == "decoder") cfg.decoder = decoder_from_name(value);
  else if (key == "filter_per_batch") cfg.filter_per_batch = (value == "true" || value == "1");
  else throw ConfigError("unknown config key: " + key);
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::size_t eq = line.find('=', start);
    if (eq == std::string::npos) {
      throw ConfigError(path + ": line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    auto trim = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t");
      std::size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  RawCorpus raw = load_raw_input(cfg);
  Fixture fixture;
  const bool replay = !cfg.fixture.empty();
  if (replay) fixture = Fixture::load(cfg.fixture, &log);
  Fixture recorded;
  Fixture* record = cfg.record.empty() ? nullptr : &recorded;

  SampleResult result =
      sample_corpus(cfg.client, raw, replay ? &fixture : nullptr, &log, record);

  const std::string path = require(cfg.samples, "samples");
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write samples: " + path);
  for (const auto& line : result.lines) file << line << '\n';
  if (record != nullptr) recorded.save(cfg.record);
  out << "sampled=" << raw.sentences.size() << " accepted=" << result.accepted
      << " rejected=" << result.rejected << "\n";
}

void cmd_vocab(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  (void)log;
  RawCorpus raw = load_raw_input(cfg);
  Vocabulary vocab = samples_to_vocab(cfg, raw);
  save_tsv(vocab, require(cfg.vocab, "vocab"));
  out << "vocab=" << vocab.size() << " total_count=" << vocab.total_count() << "\n";
}

void cmd_build(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  (void)log;
  Vocabulary vocab = load_tsv(require(cfg.vocab, "vocab"));
  const auto start = Clock::now();
  Automaton ac = Automaton::build(vocab);
  const double ms = ms_since(start);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "words=%zu nodes=%zu total_count=%llu build_ms=%.1f",
                ac.word_count(), ac.node_count(),
                static_cast<unsigned long long>(ac.total_count()), ms);
  out << buf << "\n";
}

void cmd_segment(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  Vocabulary vocab = load_tsv(require(cfg.vocab, "vocab"));
  RawCorpus raw = load_raw_input(cfg);
  Automaton ac = Automaton::build(vocab);
  const auto start = Clock::now();
  DecodedCorpus decoded = decode_corpus(raw, ac, cfg.decoder);
  const double ms = ms_since(start);
  write_segmented(decoded.tokens, require(cfg.output, "output"));
  std::size_t chars = 0;
  for (const auto& s : raw.sentences) chars += s.size();
  log << "segmented " << raw.sentences.size() << " sentences (" << chars
      << " chars) with " << decoder_name(cfg.decoder) << " in " << ms << " ms\n";
  out << "sentences=" << raw.sentences.size() << " decoder=" << decoder_name(cfg.decoder)
      << "\n";
}

void cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  (void)log;
  GoldCorpus gold = load_gold(require(cfg.gold, "gold"));
  GoldCorpus pred = load_gold(require(cfg.output, "output"));
  EvalReport report = token_prf(gold, pred, !cfg.diff.empty());
  if (!cfg.diff.empty()) save_diffs(report, cfg.diff);
  out << summary_line(report) << "\n";
}

void cmd_ppl(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  (void)log;
  Vocabulary vocab = load_tsv(require(cfg.vocab, "vocab"));
  RawCorpus raw = load_raw_input(cfg);
  Automaton ac = Automaton::build(vocab);
  DecodedCorpus decoded = decode_corpus(raw, ac, cfg.decoder);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "ppl=%.4f", corpus_ppl(decoded.scores));
  out << buf << " decoder=" << decoder_name(cfg.decoder) << "\n";
}

void cmd_iterate(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  if (cfg.iterations < 1) throw ConfigError("iterations must be >= 1");
  GoldCorpus gold = load_gold(require(cfg.gold, "gold"));
  RawCorpus raw = cfg.raw.empty() ? strip_gold(gold) : load_raw(cfg.raw);
  SuffixIndex index = SuffixIndex::build(raw);
  Fixture fixture;
  const bool replay = !cfg.fixture.empty();
  if (replay) fixture = Fixture::load(cfg.fixture, &log);

  out << "# iterate: cumulative vocabulary merge, re-filtered each iteration; seed="
      << cfg.client.seed << " top_ratio=" << cfg.top_ratio << "\n";

  Vocabulary cumulative;  // raw counts across iterations, pre-filter
  Vocabulary working;
  static constexpr Decoder kAll[] = {Decoder::kLlaca, Decoder::kUnigram, Decoder::kFmm,
                                     Decoder::kBmm};
  for (int t = 1; t <= cfg.iterations; ++t) {
    ClientConfig client = cfg.client;
    client.seed = cfg.client.seed + static_cast<std::uint64_t>(t - 1);
    SampleResult sample =
        sample_corpus(client, raw, replay ? &fixture : nullptr, &log);
    if (sample.accepted == 0) {
      throw UpstreamError("iterate: iteration " + std::to_string(t) +
                          " produced no accepted lines");
    }
    auto parsed = parse_llm_lines(raw.sentences, sample.lines);
    cumulative = merge(cumulative, count_words(parsed.accepted));
    working = pmi_filter(cumulative, index, cfg.top_ratio);
    Automaton ac = Automaton::build(working);
    for (Decoder d : kAll) {
      DecodedCorpus decoded = decode_corpus(raw, ac, d);
      EvalReport report = token_prf(gold, decoded.tokens);
      char buf[200];
      std::snprintf(buf, sizeof(buf),
                    "iter=%d decoder=%s P=%.4f R=%.4f F=%.4f ppl=%.4f vocab=%zu", t,
                    decoder_name(d), report.precision, report.recall, report.f_measure,
                    corpus_ppl(decoded.scores), working.size());
      out << buf << "\n";
    }
  }
  if (!cfg.vocab.empty()) save_tsv(working, cfg.vocab);
  if (!cfg.output.empty()) {
    Automaton ac = Automaton::build(working);
    write_segmented(decode_corpus(raw, ac, cfg.decoder).tokens, cfg.output);
  }
}

}  // namespace llaca
