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


#include "hsaudit/scm.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

#include "json.hpp"

#include "hsaudit/csv.h"
#include "hsaudit/error.h"
#include "hsaudit/util.h"

namespace hsaudit {
namespace {

constexpr char kStereotypeSystem[] =
    "You are an expert human rater trained to label hateful messages after "
    "analyzing the entire message. Also, you are an expert in the task of "
    "identifying and extracting terms in the messages relevant to hate or love.";

const NliProbs& Require(const std::map<HypothesisKind, NliProbs>& probs,
                        HypothesisKind kind, const std::string& case_id) {
  auto it = probs.find(kind);
  if (it == probs.end()) {
    throw Error(ErrorCode::kMissingHypothesis,
                "case '" + case_id + "' lacks hypothesis " +
                    std::string(HypothesisKindName(kind)));
  }
  return it->second;
}

double Differential(const NliProbs& pos, const NliProbs& neg) {
  return pos.entail + neg.contradict - pos.contradict - neg.entail;
}

}  // namespace

std::map<HypothesisKind, std::string> BuildHypotheses(const TargetIdentity& identity) {
  if (!identity.is_named()) {
    throw Error(ErrorCode::kUnsupportedIdentity,
                "no hypotheses for identity '" + identity.SurfaceString() + "'");
  }
  const std::string t = identity.SurfaceString();
  return {
      {HypothesisKind::kWarmthPos, "This message expresses warmth towards " + t + "."},
      {HypothesisKind::kWarmthNeg, "This message expresses coldness towards " + t + "."},
      {HypothesisKind::kCompetencePos, "This message expresses that " + t + " are competent."},
      {HypothesisKind::kCompetenceNeg,
       "This message expresses that " + t + " are incompetent."},
  };
}

NliProbs Softmax3(const NliLogits& logits) {
  if (!std::isfinite(logits.entail) || !std::isfinite(logits.contradict) ||
      !std::isfinite(logits.neutral)) {
    throw Error(ErrorCode::kNonFiniteLogit, "NLI logits must be finite");
  }
  const double m = std::max({logits.entail, logits.contradict, logits.neutral});
  const double e = std::exp(logits.entail - m);
  const double c = std::exp(logits.contradict - m);
  const double n = std::exp(logits.neutral - m);
  const double z = e + c + n;
  return {e / z, c / z, n / z};
}

ScmScore ComputeScmScore(const std::string& case_id,
                         const std::map<HypothesisKind, NliProbs>& probs) {
  ScmScore s;
  s.case_id = case_id;
  s.warmth = Differential(Require(probs, HypothesisKind::kWarmthPos, case_id),
                          Require(probs, HypothesisKind::kWarmthNeg, case_id));
  s.competence = Differential(Require(probs, HypothesisKind::kCompetencePos, case_id),
                              Require(probs, HypothesisKind::kCompetenceNeg, case_id));
  return s;
}

std::vector<ScmScore> ScmScoresFromRecords(std::span<const NliRecord> records) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::map<HypothesisKind, NliProbs>> by_case;
  for (const auto& r : records) {
    auto [it, inserted] = by_case.try_emplace(r.case_id);
    if (inserted) order.push_back(r.case_id);
    it->second[r.kind] = Softmax3(r.logits);
  }
  std::vector<ScmScore> out;
  out.reserve(order.size());
  for (const auto& id : order) out.push_back(ComputeScmScore(id, by_case[id]));
  return out;
}

std::map<std::pair<TargetIdentity, GoldLabel>, ScmMeans> ScmIdentityMeans(
    std::span<const ScmScore> scores, const Corpus& corpus) {
  std::map<std::pair<TargetIdentity, GoldLabel>, ScmMeans> sums;
  for (const auto& s : scores) {
    const TestCase& c = corpus.Get(s.case_id);
    auto& cell = sums[{c.identity, c.gold}];
    cell.warmth += s.warmth;
    cell.competence += s.competence;
    ++cell.n;
  }
  for (auto& [key, cell] : sums) {
    cell.warmth /= static_cast<double>(cell.n);
    cell.competence /= static_cast<double>(cell.n);
  }
  return sums;
}

ChatPrompt BuildStereotypePrompt(const TestCase& c) {
  if (c.identity.is_none()) {
    throw Error(ErrorCode::kUnsupportedIdentity,
                "case '" + c.case_id + "' targets no identity");
  }
  const std::string t = c.identity.SurfaceString();
  ChatPrompt p;
  p.system = kStereotypeSystem;
  p.user =
      "Identify the bare minimum length text span (a phrase that has a minimum "
      "number of words) in the message that expresses hate or love towards the " +
      t +
      ". Remove insignificant words from the text span other than those that "
      "are essentially required to express hate or love. Only if the text span "
      "does not reflect the sentiment of the entire message, modify the text "
      "span accordingly by adding negate words like \"not\" or \"no\" to that "
      "minimum text span so that it reflects the sentiment of the entire "
      "message and then return that modified text span without mentioning " +
      t +
      ". Answer \"None\" if you can't find any.\n\n"
      "For example, Message: \"No immigrants should be denied access to "
      "healthcare\". Here, the sentiment is love towards immigrants. "
      "Therefore, the original text span \"should be denied access\" should be "
      "negated so that it reflects the message sentiment. i.e., the modified "
      "text span has to be \"should not be denied access\". If the original "
      "text span already aligns with the sentiment expressed in the entire "
      "message, no modification is necessary.  Now try to find the text span "
      "for me that reflects the message. Just return the final answer.\n\n"
      "Message: '" +
      c.text + "'.";
  return p;
}

StereotypeSpan ParseStereotypeResponse(std::string case_id, std::string_view raw) {
  static constexpr std::string_view kQuotes[] = {"\"", "'", "`", "“", "”", "‘", "’"};
  std::string_view s = Trim(raw);
  bool changed = true;
  while (changed && !s.empty()) {
    changed = false;
    for (auto q : kQuotes) {
      if (StartsWith(s, q)) {
        s.remove_prefix(q.size());
        changed = true;
      }
      if (s.size() >= q.size() && s.substr(s.size() - q.size()) == q) {
        s.remove_suffix(q.size());
        changed = true;
      }
    }
    s = Trim(s);
  }
  StereotypeSpan out;
  out.case_id = std::move(case_id);
  if (!s.empty() && ToLower(s) != "none") out.span = std::string(s);
  return out;
}

std::string NormalizeSpan(std::string_view span) {
  std::string out;
  bool pending_space = false;
  for (char ch : Trim(span)) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      pending_space = true;
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return out;
}

StereotypeTable TopStereotypes(std::span<const StereotypeSpan> spans,
                               const Corpus& corpus, std::size_t k) {
  std::map<std::pair<TargetIdentity, GoldLabel>, std::map<std::string, std::size_t>> counts;
  for (const auto& s : spans) {
    const TestCase& c = corpus.Get(s.case_id);
    if (!s.span) continue;
    ++counts[{c.identity, c.gold}][NormalizeSpan(*s.span)];
  }
  StereotypeTable table;
  for (auto& [key, tally] : counts) {
    std::vector<std::pair<std::string, std::size_t>> ranked(tally.begin(), tally.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.second > b.second;
    });
    if (ranked.size() > k) ranked.resize(k);
    table[key] = std::move(ranked);
  }
  return table;
}

std::string ScmScoresToCsv(std::span<const ScmScore> scores) {
  std::string out = CsvLine({"case_id", "warmth", "competence"});
  for (const auto& s : scores) {
    out += CsvLine({s.case_id, FormatShortest(s.warmth), FormatShortest(s.competence)});
  }
  return out;
}

std::vector<ScmScore> ScmScoresFromCsv(std::string_view text) {
  const CsvTable table(text);
  const auto id = table.ColumnIndex("case_id");
  const auto w = table.ColumnIndex("warmth");
  const auto c = table.ColumnIndex("competence");
  if (!id || !w || !c) {
    throw Error(ErrorCode::kMissingColumn, "scm scores need case_id,warmth,competence");
  }
  std::vector<ScmScore> out;
  for (const auto& row : table.rows()) {
    const std::size_t need = std::max({*id, *w, *c});
    std::optional<double> warmth, competence;
    if (row.fields.size() > need) {
      warmth = ParseDouble(row.fields[*w]);
      competence = ParseDouble(row.fields[*c]);
    }
    if (!warmth || !competence) {
      throw Error(ErrorCode::kMalformedRow,
                  "scm scores line " + std::to_string(row.line));
    }
    out.push_back({row.fields[*id], *warmth, *competence});
  }
  return out;
}

std::string SpansToJsonl(std::span<const StereotypeSpan> spans) {
  std::string out;
  for (const auto& s : spans) {
    nlohmann::ordered_json j;
    j["case_id"] = s.case_id;
    j["span"] = s.span ? nlohmann::ordered_json(*s.span) : nlohmann::ordered_json(nullptr);
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<StereotypeSpan> SpansFromJsonl(std::string_view text) {
  std::vector<StereotypeSpan> out;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const auto j = nlohmann::json::parse(lines[i], nullptr, false);
    if (!j.is_object() || !j.contains("case_id") || !j["case_id"].is_string() ||
        !j.contains("span") || !(j["span"].is_string() || j["span"].is_null())) {
      throw Error(ErrorCode::kMalformedRow, "spans line " + std::to_string(i + 1));
    }
    StereotypeSpan s;
    s.case_id = j["case_id"].get<std::string>();
    if (j["span"].is_string()) s.span = j["span"].get<std::string>();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace hsaudit
