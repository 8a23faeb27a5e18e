/* Copyright 2026 The hsaudit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/


// Stereotype Content Model scoring: NLI hypotheses over warmth and
// competence, the semantic-differential score, per-identity summaries, and
// the stereotype-span prompt.

#ifndef HSAUDIT_SCM_H_
#define HSAUDIT_SCM_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsaudit/adapters.h"
#include "hsaudit/corpus.h"
#include "hsaudit/emotion.h"

namespace hsaudit {

// One hypothesis per kind, with the identity's surface string substituted.
// Throws Error(kUnsupportedIdentity) for Other identities.
std::map<HypothesisKind, std::string> BuildHypotheses(const TargetIdentity& identity);

struct NliProbs {
  double entail = 0.0;
  double contradict = 0.0;
  double neutral = 0.0;
};

// Max-subtracted softmax. Throws Error(kNonFiniteLogit).
NliProbs Softmax3(const NliLogits& logits);

struct ScmScore {
  std::string case_id;
  double warmth = 0.0;      // in [-2, 2]
  double competence = 0.0;  // in [-2, 2]
};

// warmth     = Pe(H1+) + Pc(H1-) - Pc(H1+) - Pe(H1-)
// competence = Pe(H2+) + Pc(H2-) - Pc(H2+) - Pe(H2-)
// Throws Error(kMissingHypothesis) when a kind is absent.
ScmScore ComputeScmScore(const std::string& case_id,
                         const std::map<HypothesisKind, NliProbs>& probs);

// Groups NLI records by case (first-seen order) and scores each case.
std::vector<ScmScore> ScmScoresFromRecords(std::span<const NliRecord> records);

struct ScmMeans {
  double warmth = 0.0;
  double competence = 0.0;
  std::size_t n = 0;
};

// Arithmetic means per (identity, gold). Throws Error(kUnknownCaseId).
std::map<std::pair<TargetIdentity, GoldLabel>, ScmMeans> ScmIdentityMeans(
    std::span<const ScmScore> scores, const Corpus& corpus);

// Stereotype-span extraction prompt. The message is inserted verbatim inside
// single quotes.
ChatPrompt BuildStereotypePrompt(const TestCase& c);

struct StereotypeSpan {
  std::string case_id;
  std::optional<std::string> span;  // nullopt iff the answer was "None"
};

// Strips surrounding whitespace and quotes; "None" in any case -> nullopt.
StereotypeSpan ParseStereotypeResponse(std::string case_id, std::string_view raw);

// Lowercase and collapse runs of whitespace to one space.
std::string NormalizeSpan(std::string_view span);

// Most frequent normalized spans per (identity, gold), count descending then
// lexicographic. None spans are skipped. Throws Error(kUnknownCaseId).
using StereotypeTable =
    std::map<std::pair<TargetIdentity, GoldLabel>,
             std::vector<std::pair<std::string, std::size_t>>>;
StereotypeTable TopStereotypes(std::span<const StereotypeSpan> spans,
                               const Corpus& corpus, std::size_t k);

// scm_scores.csv: case_id,warmth,competence
std::string ScmScoresToCsv(std::span<const ScmScore> scores);
std::vector<ScmScore> ScmScoresFromCsv(std::string_view text);

// spans.jsonl: {"case_id","span"} with span null for None.
std::string SpansToJsonl(std::span<const StereotypeSpan> spans);
std::vector<StereotypeSpan> SpansFromJsonl(std::string_view text);

}  // namespace hsaudit

#endif  // HSAUDIT_SCM_H_
