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

#ifndef LLACA_EVAL_HPP_
#define LLACA_EVAL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "llaca/corpus.hpp"

namespace llaca {

struct SentenceDiff {
  std::size_t index = 0;  // zero-based sentence index
  std::vector<std::u32string> gold;
  std::vector<std::u32string> pred;
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::uint64_t correct = 0;
  std::uint64_t predicted = 0;
  std::uint64_t gold = 0;
  std::vector<SentenceDiff> per_sentence;  // only when diffs are requested
};

// Token-level precision/recall/F against the gold standard: tokens compared
// as character spans over the whitespace-stripped sentence, micro-averaged
// over the corpus. Throws DataError when sentence counts differ or stripped
// sentences mismatch (naming the first offending line).
EvalReport token_prf(const GoldCorpus& gold, const GoldCorpus& pred,
                     bool collect_diffs = false);

// "P=... R=... F=... correct=... pred=... gold=..."
std::string summary_line(const EvalReport& report);

// One mismatch per line: index<TAB>gold tokens<TAB>predicted tokens.
void save_diffs(const EvalReport& report, const std::string& path);

}  // namespace llaca

#endif  // LLACA_EVAL_HPP_
