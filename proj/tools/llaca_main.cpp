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

#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "llaca/cli.hpp"
#include "llaca/errors.hpp"

namespace {

struct CliOverrides {
  std::string config;
  std::string raw, gold, samples, vocab, output, fixture, record, diff;
  std::string decoder;
  double top_ratio = -1.0;
  long long seed = -1;
  int iterations = -1;
  std::string endpoint, model;
};

void add_common_options(CLI::App* cmd, CliOverrides& ov) {
  cmd->add_option("--config", ov.config, "key = value config file");
  cmd->add_option("--raw", ov.raw, "raw corpus (one sentence per line)");
  cmd->add_option("--gold", ov.gold, "gold corpus (space-separated tokens)");
  cmd->add_option("--samples", ov.samples, "sampled segmented-lines file");
  cmd->add_option("--vocab", ov.vocab, "vocabulary TSV");
  cmd->add_option("--output", ov.output, "segmented output file");
  cmd->add_option("--fixture", ov.fixture, "replay fixture instead of the network");
  cmd->add_option("--record", ov.record, "record live responses as a fixture");
  cmd->add_option("--diff", ov.diff, "write per-sentence mismatches here (eval)");
  cmd->add_option("--decoder", ov.decoder, "llaca|uni|fmm|bmm");
  cmd->add_option("--top-ratio", ov.top_ratio, "PMI top ratio in (0,1]");
  cmd->add_option("--seed", ov.seed, "batch shuffling seed");
  cmd->add_option("--iterations", ov.iterations, "iteration count (iterate)");
  cmd->add_option("--endpoint", ov.endpoint, "chat-completions endpoint URL");
  cmd->add_option("--model", ov.model, "model identifier");
}

llaca::RunConfig resolve(const CliOverrides& ov) {
  llaca::RunConfig cfg;
  if (!ov.config.empty()) cfg = llaca::load_config_file(ov.config);
  if (!ov.raw.empty()) cfg.raw = ov.raw;
  if (!ov.gold.empty()) cfg.gold = ov.gold;
  if (!ov.samples.empty()) cfg.samples = ov.samples;
  if (!ov.vocab.empty()) cfg.vocab = ov.vocab;
  if (!ov.output.empty()) cfg.output = ov.output;
  if (!ov.fixture.empty()) cfg.fixture = ov.fixture;
  if (!ov.record.empty()) cfg.record = ov.record;
  if (!ov.diff.empty()) cfg.diff = ov.diff;
  if (!ov.decoder.empty()) cfg.decoder = llaca::decoder_from_name(ov.decoder);
  if (ov.top_ratio >= 0.0) cfg.top_ratio = ov.top_ratio;
  if (ov.seed >= 0) cfg.client.seed = static_cast<std::uint64_t>(ov.seed);
  if (ov.iterations >= 0) cfg.iterations = ov.iterations;
  if (!ov.endpoint.empty()) cfg.client.endpoint = ov.endpoint;
  if (!ov.model.empty()) cfg.client.model = ov.model;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised word segmentation from LLM samples"};
  app.require_subcommand(1);

  CliOverrides ov;
  using Cmd = std::function<void(const llaca::RunConfig&, std::ostream&, std::ostream&)>;
  struct Sub {
    const char* name;
    const char* help;
    Cmd run;
  };
  const Sub subs[] = {
      {"sample", "query the LLM (or fixture) and write sampled lines", llaca::cmd_sample},
      {"vocab", "build a PMI-filtered vocabulary TSV from sampled lines", llaca::cmd_vocab},
      {"build", "build the automaton from a vocabulary TSV and report stats",
       llaca::cmd_build},
      {"segment", "segment the raw corpus with the configured decoder",
       llaca::cmd_segment},
      {"eval", "token precision/recall/F against the gold corpus", llaca::cmd_eval},
      {"ppl", "corpus perplexity of the decoder's segmentation", llaca::cmd_ppl},
      {"iterate", "multi-iteration sample/merge/segment/eval driver", llaca::cmd_iterate},
  };
  for (const Sub& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    add_common_options(cmd, ov);
    cmd->callback([&ov, &sub]() {
      sub.run(resolve(ov), std::cout, std::cerr);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? llaca::kExitOk : llaca::kExitConfig;
  } catch (const llaca::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return llaca::kExitConfig;
  } catch (const llaca::UpstreamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return llaca::kExitUpstream;
  } catch (const llaca::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return llaca::kExitData;
  } catch (const llaca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return llaca::kExitData;
  }
  return llaca::kExitOk;
}
