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

#include "llaca/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "llaca/errors.hpp"
#include "llaca/unicode.hpp"

namespace llaca {

EvalReport token_prf(const GoldCorpus& gold, const GoldCorpus& pred, bool collect_diffs) {
  if (gold.sentences.size() != pred.sentences.size()) {
    throw DataError("eval: sentence counts differ (gold " +
                    std::to_string(gold.sentences.size()) + ", predicted " +
                    std::to_string(pred.sentences.size()) + ")");
  }
  EvalReport report;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    std::u32string gold_text;
    for (const auto& t : gold.sentences[i]) gold_text += t;
    std::u32string pred_text;
    for (const auto& t : pred.sentences[i]) pred_text += t;
    if (gold_text != pred_text) {
      throw DataError("eval: line " + std::to_string(i + 1) +
                      ": stripped sentences differ");
    }

    // Both span lists are sorted by construction; intersect by merge.
    const auto& gs = gold.spans[i];
    const auto& ps = pred.spans[i];
    std::size_t a = 0, b = 0, correct = 0;
    while (a < gs.size() && b < ps.size()) {
      if (gs[a] == ps[b]) {
        ++correct;
        ++a;
        ++b;
      } else if (gs[a] < ps[b]) {
        ++a;
      } else {
        ++b;
      }
    }
    report.correct += correct;
    report.gold += gs.size();
    report.predicted += ps.size();
    if (collect_diffs && correct != gs.size()) {
      report.per_sentence.push_back({i, gold.sentences[i], pred.sentences[i]});
    }
  }
  report.precision = report.predicted > 0
                         ? static_cast<double>(report.correct) /
                               static_cast<double>(report.predicted)
                         : 0.0;
  report.recall = report.gold > 0 ? static_cast<double>(report.correct) /
                                        static_cast<double>(report.gold)
                                  : 0.0;
  const double pr = report.precision + report.recall;
  report.f_measure = pr > 0.0 ? 2.0 * report.precision * report.recall / pr : 0.0;
  return report;
}

std::string summary_line(const EvalReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "P=%.4f R=%.4f F=%.4f correct=%llu pred=%llu gold=%llu",
                r.precision, r.recall, r.f_measure,
                static_cast<unsigned long long>(r.correct),
                static_cast<unsigned long long>(r.predicted),
                static_cast<unsigned long long>(r.gold));
  return buf;
}

void save_diffs(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write diff file: " + path);
  for (const SentenceDiff& d : report.per_sentence) {
    out << d.index << '\t';
    for (std::size_t i = 0; i < d.gold.size(); ++i) {
      if (i) out << ' ';
      out << utf8_encode(d.gold[i]);
    }
    out << '\t';
    for (std::size_t i = 0; i < d.pred.size(); ++i) {
      if (i) out << ' ';
      out << utf8_encode(d.pred[i]);
    }
    out << '\n';
  }
}

}  // namespace llaca
