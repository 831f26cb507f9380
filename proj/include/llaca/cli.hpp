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

#ifndef LLACA_CLI_HPP_
#define LLACA_CLI_HPP_

#include <ostream>
#include <string>

#include "llaca/llm_client.hpp"
#include "llaca/segmenter.hpp"

namespace llaca {

// Exit codes: 0 success, 1 usage/config, 2 data/alignment, 3 upstream failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitUpstream = 3;

struct RunConfig {
  // Paths.
  std::string raw;      // raw corpus (one sentence per line)
  std::string gold;     // gold corpus (space-separated tokens)
  std::string samples;  // sampled segmented lines (sample output, vocab input)
  std::string vocab;    // vocabulary TSV
  std::string output;   // segmented output (segment output, eval input)
  std::string fixture;  // replay fixture
  std::string record;   // write live responses as a fixture here
  std::string diff;     // eval mismatch records

  ClientConfig client;
  double top_ratio = 0.99;
  int iterations = 1;
  Decoder decoder = Decoder::kLlaca;
  bool filter_per_batch = false;
};

// Key-value config file: `key = value`, '#' comments, "\n" escapes in the
// prompt value. Unknown keys are a ConfigError.
RunConfig load_config_file(const std::string& path);
void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value);

// Subcommand bodies. They throw Error subclasses; main() maps them to exit
// codes. `out` is the report stream (stdout), `log` the progress stream.
void cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& log);
void cmd_vocab(const RunConfig& cfg, std::ostream& out, std::ostream& log);
void cmd_build(const RunConfig& cfg, std::ostream& out, std::ostream& log);
void cmd_segment(const RunConfig& cfg, std::ostream& out, std::ostream& log);
void cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& log);
void cmd_ppl(const RunConfig& cfg, std::ostream& out, std::ostream& log);
void cmd_iterate(const RunConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace llaca

#endif  // LLACA_CLI_HPP_
