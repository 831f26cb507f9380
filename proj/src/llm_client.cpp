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

#include "llaca/llm_client.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "llaca/errors.hpp"
#include "llaca/unicode.hpp"

namespace llaca {

namespace {

// splitmix64: tiny, stable across platforms, good enough for shuffling.
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  // Uniform-ish draw in [0, bound); modulo bias is irrelevant here.
  std::uint64_t bounded(std::uint64_t bound) { return next() % bound; }
};

std::vector<std::string> split_response_lines(const std::string& body) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t nl = body.find('\n', pos);
    std::string line = (nl == std::string::npos) ? body.substr(pos)
                                                 : body.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return lines;
}

struct ParsedEndpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // /v1/chat/completions unless the URL carries one
};

ParsedEndpoint parse_endpoint(const std::string& url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint must be a http(s) URL: " + url);
  }
  std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {url, "/v1/chat/completions"};
  }
  std::string path = url.substr(path_start);
  if (path == "/") path = "/v1/chat/completions";
  return {url.substr(0, path_start), path};
}

}  // namespace

void validate_prompt_template(const std::string& prompt_template) {
  std::size_t first = prompt_template.find("{TEXT}");
  if (first == std::string::npos ||
      prompt_template.find("{TEXT}", first + 1) != std::string::npos) {
    throw ConfigError("prompt template must contain exactly one {TEXT} slot");
  }
}

BatchPlan make_batches(std::size_t sentence_count, std::uint64_t seed) {
  BatchPlan plan;
  if (sentence_count == 0) return plan;
  std::vector<std::size_t> indices(sentence_count);
  for (std::size_t i = 0; i < sentence_count; ++i) indices[i] = i;
  SplitMix64 rng{seed};
  for (std::size_t i = sentence_count - 1; i > 0; --i) {
    std::size_t j = static_cast<std::size_t>(rng.bounded(i + 1));
    std::swap(indices[i], indices[j]);
  }
  const auto batch_size = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(sentence_count))));
  for (std::size_t pos = 0; pos < sentence_count; pos += batch_size) {
    const std::size_t end = std::min(pos + batch_size, sentence_count);
    plan.batches.emplace_back(indices.begin() + static_cast<std::ptrdiff_t>(pos),
                              indices.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return plan;
}

Fixture Fixture::parse(std::string_view text, const std::string& origin,
                       std::ostream* log) {
  Fixture fx;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::optional<std::u32string> pending;
  std::size_t pending_line = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = (nl == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '>') {
      if (pending) {
        throw DataError(origin + ": line " + std::to_string(pending_line) +
                        ": '>' line without a following '<' line");
      }
      pending = utf8_decode(line.substr(1));
      pending_line = line_no;
    } else if (line.front() == '<') {
      if (!pending) {
        throw DataError(origin + ": line " + std::to_string(line_no) +
                        ": '<' line without a preceding '>' line");
      }
      if (fx.map_.count(*pending) && log) {
        *log << "fixture: duplicate sentence at line " << line_no
             << ", last entry wins\n";
      }
      fx.map_[*pending] = std::string(line.substr(1));
      pending.reset();
    } else {
      throw DataError(origin + ": line " + std::to_string(line_no) +
                      ": expected '>' or '<' prefix");
    }
  }
  if (pending) {
    throw DataError(origin + ": line " + std::to_string(pending_line) +
                    ": '>' line without a following '<' line");
  }
  return fx;
}

Fixture Fixture::load(const std::string& path, std::ostream* log) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open fixture: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path, log);
}

void Fixture::add(std::u32string_view sentence, std::string output_line) {
  map_[std::u32string(sentence)] = std::move(output_line);
}

std::optional<std::string> Fixture::lookup(std::u32string_view sentence) const {
  auto it = map_.find(std::u32string(sentence));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void Fixture::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write fixture: " + path);
  for (const auto& [sentence, line] : map_) {
    out << '>' << utf8_encode(sentence) << '\n' << '<' << line << '\n';
  }
}

namespace {

// One POST against a chat-completions endpoint; empty optional on failure.
std::optional<std::string> post_chat_completion(const ClientConfig& cfg,
                                                const std::string& prompt,
                                                std::ostream* log) {
  const ParsedEndpoint ep = parse_endpoint(cfg.endpoint);
  httplib::Client client(ep.base);
  if (!client.is_valid()) {
    if (log) *log << "llm: invalid endpoint " << cfg.endpoint << "\n";
    return std::nullopt;
  }
  const auto timeout_ms = static_cast<time_t>(cfg.timeout_s * 1000.0);
  client.set_connection_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
  client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);

  nlohmann::json body = {
      {"model", cfg.model},
      {"temperature", cfg.temperature},
      {"messages", {{{"role", "user"}, {"content", prompt}}}},
  };
  httplib::Headers headers;
  if (const char* key = std::getenv("LLACA_API_KEY"); key != nullptr && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  auto res = client.Post(ep.path, headers, body.dump(), "application/json");
  if (!res) {
    if (log) *log << "llm: transport error: " << httplib::to_string(res.error()) << "\n";
    return std::nullopt;
  }
  if (res->status < 200 || res->status >= 300) {
    if (log) *log << "llm: HTTP " << res->status << "\n";
    return std::nullopt;
  }
  try {
    auto json = nlohmann::json::parse(res->body);
    return json.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    if (log) *log << "llm: malformed response body\n";
    return std::nullopt;
  }
}

}  // namespace

std::vector<std::string> request_segmentation(const ClientConfig& cfg,
                                              std::span<const std::u32string> batch,
                                              const Fixture* fixture,
                                              std::ostream* log) {
  std::vector<std::string> lines(batch.size());
  if (fixture != nullptr) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      lines[i] = fixture->lookup(batch[i]).value_or(std::string());
    }
    return lines;
  }

  validate_prompt_template(cfg.prompt_template);
  std::string joined;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (i) joined.push_back('\n');
    joined += utf8_encode(batch[i]);
  }
  std::string prompt = cfg.prompt_template;
  prompt.replace(prompt.find("{TEXT}"), 6, joined);

  std::optional<std::string> content;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto backoff =
          std::chrono::milliseconds(250LL << std::min(attempt - 1, 6));
      std::this_thread::sleep_for(backoff);
    }
    content = post_chat_completion(cfg, prompt, log);
    if (content) break;
  }
  if (!content) return lines;  // all empty: batch rejected downstream

  auto response_lines = split_response_lines(*content);
  for (std::size_t i = 0; i < batch.size() && i < response_lines.size(); ++i) {
    lines[i] = std::move(response_lines[i]);
  }
  return lines;
}

SampleResult sample_corpus(const ClientConfig& cfg, const RawCorpus& corpus,
                           const Fixture* fixture, std::ostream* log,
                           Fixture* record) {
  validate_prompt_template(cfg.prompt_template);
  if (corpus.sentences.empty()) throw DataError("sample: corpus is empty");
  const BatchPlan plan = make_batches(corpus.sentences.size(), cfg.seed);

  // Fetch batches concurrently into indexed slots; everything downstream
  // folds in batch order, so results stay deterministic.
  std::vector<std::vector<std::string>> responses(plan.batches.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::max(
      1, std::min<int>(cfg.concurrency, static_cast<int>(plan.batches.size())));
  auto worker = [&]() {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= plan.batches.size()) return;
      std::vector<std::u32string> batch;
      batch.reserve(plan.batches[b].size());
      for (std::size_t idx : plan.batches[b]) batch.push_back(corpus.sentences[idx]);
      responses[b] = request_segmentation(cfg, batch, fixture, nullptr);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SampleResult result;
  result.lines.assign(corpus.sentences.size(), std::string());
  result.per_batch.resize(plan.batches.size());
  for (std::size_t b = 0; b < plan.batches.size(); ++b) {
    const auto& batch_indices = plan.batches[b];
    std::vector<std::u32string> batch;
    batch.reserve(batch_indices.size());
    for (std::size_t idx : batch_indices) batch.push_back(corpus.sentences[idx]);
    if (record != nullptr) {
      for (std::size_t i = 0; i < batch.size(); ++i) {
        record->add(batch[i], responses[b][i]);
      }
    }
    // Per-line validation: accepted lines land in corpus order, rejected
    // ones stay empty so a later parse rejects them again.
    for (std::size_t i = 0; i < batch.size(); ++i) {
      std::span<const std::u32string> one_raw(&batch[i], 1);
      std::span<const std::string> one_line(&responses[b][i], 1);
      auto parsed = parse_llm_lines(one_raw, one_line);
      if (parsed.accepted.size() == 1) {
        result.lines[batch_indices[i]] = responses[b][i];
        ++result.per_batch[b].accepted;
      } else {
        ++result.per_batch[b].rejected;
      }
    }
    result.accepted += result.per_batch[b].accepted;
    result.rejected += result.per_batch[b].rejected;
    if (log) {
      *log << "batch " << (b + 1) << "/" << plan.batches.size() << ": accepted "
           << result.per_batch[b].accepted << ", rejected "
           << result.per_batch[b].rejected << "\n";
    }
  }
  return result;
}

Vocabulary run_llm_ws(const ClientConfig& cfg, const RawCorpus& corpus,
                      const SuffixIndex& index, double top_ratio,
                      const Fixture* fixture, bool filter_per_batch,
                      std::ostream* log) {
  SampleResult sample = sample_corpus(cfg, corpus, fixture, log);
  if (sample.accepted == 0) {
    throw UpstreamError("run_llm_ws: no line survived validation; vocabulary is empty");
  }
  const BatchPlan plan = make_batches(corpus.sentences.size(), cfg.seed);
  if (filter_per_batch) {
    // Algorithm-literal variant: filter each batch before pooling.
    Vocabulary pooled;
    for (const auto& batch_indices : plan.batches) {
      std::vector<std::u32string> raws;
      std::vector<std::string> lines;
      for (std::size_t idx : batch_indices) {
        raws.push_back(corpus.sentences[idx]);
        lines.push_back(sample.lines[idx]);
      }
      auto parsed = parse_llm_lines(raws, lines);
      if (parsed.accepted.empty()) continue;
      pooled = merge(pooled, pmi_filter(count_words(parsed.accepted), index, top_ratio));
    }
    return pooled;
  }
  auto parsed = parse_llm_lines(corpus.sentences, sample.lines);
  return pmi_filter(count_words(parsed.accepted), index, top_ratio);
}

}  // namespace llaca
