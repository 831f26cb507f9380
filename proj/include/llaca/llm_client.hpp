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

#ifndef LLACA_LLM_CLIENT_HPP_
#define LLACA_LLM_CLIENT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "llaca/corpus.hpp"
#include "llaca/suffix_index.hpp"
#include "llaca/vocab.hpp"

namespace llaca {

inline constexpr const char* kDefaultPrompt =
    "Segment the following text into words. Separate words with single "
    "spaces. Output one line per input line, with no explanations.\n{TEXT}";

// API key is read from the LLACA_API_KEY environment variable.
struct ClientConfig {
  std::string endpoint;  // e.g. http://localhost:8080/v1/chat/completions
  std::string model;
  std::string prompt_template = kDefaultPrompt;  // must contain one {TEXT} slot
  double temperature = 0.0;
  int max_retries = 3;
  double timeout_s = 30.0;
  std::uint64_t seed = 0;
  int concurrency = 4;  // batch requests in flight
};

// Throws ConfigError unless the template contains exactly one {TEXT} slot.
void validate_prompt_template(const std::string& prompt_template);

struct BatchPlan {
  std::vector<std::vector<std::size_t>> batches;  // partition of 0..K-1
};

// Shuffles sentence indices with a seeded deterministic generator, then
// chunks them into runs of ceil(sqrt(K)).
BatchPlan make_batches(std::size_t sentence_count, std::uint64_t seed);

// Deterministic replay of recorded responses, keyed by raw sentence.
class Fixture {
 public:
  static Fixture load(const std::string& path, std::ostream* log = nullptr);
  static Fixture parse(std::string_view text, const std::string& origin,
                       std::ostream* log = nullptr);

  void add(std::u32string_view sentence, std::string output_line);
  std::optional<std::string> lookup(std::u32string_view sentence) const;
  void save(const std::string& path) const;
  std::size_t size() const { return map_.size(); }

 private:
  std::map<std::u32string, std::string> map_;
};

// One chat-completions request for the whole batch; the response is split
// into lines aligned positionally (missing lines padded empty, extras
// dropped). Transport failures are retried with exponential backoff; a batch
// that still fails yields empty lines so downstream validation rejects it.
// In fixture mode the fixture is consulted instead of the network.
std::vector<std::string> request_segmentation(const ClientConfig& cfg,
                                              std::span<const std::u32string> batch,
                                              const Fixture* fixture = nullptr,
                                              std::ostream* log = nullptr);

struct BatchStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

struct SampleResult {
  // One line per corpus sentence, in corpus order: the accepted segmented
  // line, or empty when the batch response failed validation for it.
  std::vector<std::string> lines;
  std::vector<BatchStats> per_batch;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

// make_batches + request_segmentation + per-line validation, with up to
// cfg.concurrency batches in flight. When `record` is non-null, raw
// responses are added to it (before validation).
SampleResult sample_corpus(const ClientConfig& cfg, const RawCorpus& corpus,
                           const Fixture* fixture = nullptr,
                           std::ostream* log = nullptr, Fixture* record = nullptr);

// Full LLM-WS pass: sample, pool counts (or filter per batch when
// filter_per_batch is set), PMI-filter with top_ratio, return the vocabulary.
// Throws UpstreamError when no line at all survives validation.
Vocabulary run_llm_ws(const ClientConfig& cfg, const RawCorpus& corpus,
                      const SuffixIndex& index, double top_ratio,
                      const Fixture* fixture = nullptr,
                      bool filter_per_batch = false, std::ostream* log = nullptr);

}  // namespace llaca

#endif  // LLACA_LLM_CLIENT_HPP_
