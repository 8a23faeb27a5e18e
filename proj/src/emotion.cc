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

#include "hsaudit/emotion.h"

#include <cctype>
#include <unordered_map>

#include "json.hpp"

#include "hsaudit/error.h"
#include "hsaudit/util.h"

namespace hsaudit {
namespace {

struct EmotionEntry {
  Emotion emotion;
  std::string_view name;
  std::string_view display;
  Polarity polarity;
};

constexpr EmotionEntry kEmotionTable[] = {
    {Emotion::kAdmiration, "admiration", "Admiration", Polarity::kPositive},
    {Emotion::kAmusement, "amusement", "Amusement", Polarity::kPositive},
    {Emotion::kApproval, "approval", "Approval", Polarity::kPositive},
    {Emotion::kCaring, "caring", "Caring", Polarity::kPositive},
    {Emotion::kDesire, "desire", "Desire", Polarity::kPositive},
    {Emotion::kExcitement, "excitement", "Excitement", Polarity::kPositive},
    {Emotion::kGratitude, "gratitude", "Gratitude", Polarity::kPositive},
    {Emotion::kJoy, "joy", "Joy", Polarity::kPositive},
    {Emotion::kLove, "love", "Love", Polarity::kPositive},
    {Emotion::kOptimism, "optimism", "Optimism", Polarity::kPositive},
    {Emotion::kPride, "pride", "Pride", Polarity::kPositive},
    {Emotion::kRelief, "relief", "Relief", Polarity::kPositive},
    {Emotion::kAnger, "anger", "Anger", Polarity::kNegative},
    {Emotion::kAnnoyance, "annoyance", "Annoyance", Polarity::kNegative},
    {Emotion::kDisappointment, "disappointment", "Disappointment", Polarity::kNegative},
    {Emotion::kDisapproval, "disapproval", "Disapproval", Polarity::kNegative},
    {Emotion::kDisgust, "disgust", "Disgust", Polarity::kNegative},
    {Emotion::kEmbarrassment, "embarrassment", "Embarrassment", Polarity::kNegative},
    {Emotion::kFear, "fear", "Fear", Polarity::kNegative},
    {Emotion::kGrief, "grief", "Grief", Polarity::kNegative},
    {Emotion::kNervousness, "nervousness", "Nervousness", Polarity::kNegative},
    {Emotion::kRemorse, "remorse", "Remorse", Polarity::kNegative},
    {Emotion::kSadness, "sadness", "Sadness", Polarity::kNegative},
    {Emotion::kConfusion, "confusion", "Confusion", Polarity::kAmbiguous},
    {Emotion::kCuriosity, "curiosity", "Curiosity", Polarity::kAmbiguous},
    {Emotion::kRealization, "realization", "Realization", Polarity::kAmbiguous},
    {Emotion::kSurprise, "surprise", "Surprise", Polarity::kAmbiguous},
};
static_assert(std::size(kEmotionTable) == kNumEmotions);

constexpr std::array<Emotion, kNumEmotions> kAllEmotions = [] {
  std::array<Emotion, kNumEmotions> out{};
  for (std::size_t i = 0; i < kNumEmotions; ++i) out[i] = kEmotionTable[i].emotion;
  return out;
}();

const EmotionEntry& EntryFor(Emotion e) {
  return kEmotionTable[static_cast<std::size_t>(e)];
}

// The system prompt lists the taxonomy in this exact spelling, including the
// historical "nerveousness".
std::string EmotionSystemPrompt() {
  std::string out =
      "You are an expert human rater trained to identify emotions in text.\n"
      "The list of emotions of interest are:\n";
  for (const auto& entry : kEmotionTable) {
    out += "- ";
    out += entry.emotion == Emotion::kNervousness ? "nerveousness" : entry.name;
    out += "\n";
  }
  out.pop_back();
  return out;
}

// Leading/trailing characters removed before matching: ASCII whitespace and
// punctuation plus the UTF-8 curly quotes.
std::string_view StripDecorations(std::string_view s) {
  static constexpr std::string_view kCurly[] = {"‘", "’", "“", "”"};
  bool changed = true;
  while (changed && !s.empty()) {
    changed = false;
    const auto front = static_cast<unsigned char>(s.front());
    const auto back = static_cast<unsigned char>(s.back());
    if (std::isspace(front) || std::ispunct(front)) {
      s.remove_prefix(1);
      changed = true;
      continue;
    }
    if (std::isspace(back) || std::ispunct(back)) {
      s.remove_suffix(1);
      changed = true;
      continue;
    }
    for (auto q : kCurly) {
      if (StartsWith(s, q)) {
        s.remove_prefix(q.size());
        changed = true;
      } else if (s.size() >= q.size() && s.substr(s.size() - q.size()) == q) {
        s.remove_suffix(q.size());
        changed = true;
      }
    }
  }
  return s;
}

std::string GroupLabel(const TestCase& c, GroupBy group_by) {
  switch (group_by) {
    case GroupBy::kIdentity: return c.identity.DisplayName();
    case GroupBy::kFunctionality: return c.functionality;
    case GroupBy::kGold: return std::string(GoldLabelName(c.gold));
  }
  return "";
}

// Joins each non-None annotation with its corpus case and prediction.
struct Joined {
  const TestCase* test_case;
  Emotion emotion;
  bool correct;
};

std::vector<Joined> JoinAnnotations(std::span<const EmotionAnnotation> annotations,
                                    std::span<const ScoreRecord> predictions,
                                    const Corpus& corpus) {
  std::unordered_map<std::string, const ScoreRecord*> by_case;
  for (const auto& p : predictions) by_case.emplace(p.case_id, &p);
  std::vector<Joined> out;
  for (const auto& a : annotations) {
    const TestCase& c = corpus.Get(a.case_id);
    if (a.emotion == Emotion::kNone) continue;
    auto it = by_case.find(a.case_id);
    if (it == by_case.end()) {
      throw Error(ErrorCode::kMissingPrediction,
                  "no prediction for annotated case '" + a.case_id + "'");
    }
    out.push_back({&c, a.emotion, it->second->label == c.gold});
  }
  return out;
}

void Count(AccuracyCell& cell, bool correct) {
  ++cell.n;
  if (correct) ++cell.correct;
  cell.accuracy = static_cast<double>(cell.correct) / static_cast<double>(cell.n);
}

}  // namespace

std::span<const Emotion> AllEmotions() { return kAllEmotions; }

std::string_view EmotionName(Emotion e) {
  return e == Emotion::kNone ? "none" : EntryFor(e).name;
}

std::string_view EmotionDisplayName(Emotion e) {
  return e == Emotion::kNone ? "None" : EntryFor(e).display;
}

Polarity PolarityOf(Emotion e) {
  if (e == Emotion::kNone) {
    throw Error(ErrorCode::kNoPolarityForNone, "the None emotion has no polarity");
  }
  return EntryFor(e).polarity;
}

ChatPrompt BuildEmotionPrompt(const TestCase& c) {
  if (c.identity.is_none()) {
    throw Error(ErrorCode::kUnsupportedIdentity,
                "case '" + c.case_id + "' targets no identity");
  }
  ChatPrompt p;
  p.system = EmotionSystemPrompt();
  p.user = "Label the main emotion towards " + c.identity.SurfaceString() +
           " expressed in the following message:\n\nMessage: '" + c.text +
           "'.\n\nReturn a single emotion or answer 'None' if none of the "
           "emotions is detected.";
  return p;
}

Emotion ParseEmotionResponse(std::string_view raw) {
  const std::string token = ToLower(StripDecorations(raw));
  if (token == "none") return Emotion::kNone;
  if (token == "nerveousness") return Emotion::kNervousness;
  for (const auto& entry : kEmotionTable) {
    if (token == entry.name) return entry.emotion;
  }
  throw Error(ErrorCode::kParseFailure,
              "response '" + std::string(raw) + "' is not a taxonomy emotion");
}

EmotionDistribution ComputeEmotionDistribution(
    std::span<const EmotionAnnotation> annotations, const Corpus& corpus,
    GroupBy group_by) {
  EmotionDistribution dist;
  dist.total = corpus.size();
  for (const auto& a : annotations) {
    const TestCase& c = corpus.Get(a.case_id);
    if (a.emotion == Emotion::kNone) continue;
    ++dist.detected;
    ++dist.counts[GroupLabel(c, group_by)][a.emotion];
  }
  return dist;
}

std::map<Emotion, AccuracyCell> AccuracyByEmotion(
    std::span<const EmotionAnnotation> annotations,
    std::span<const ScoreRecord> predictions, const Corpus& corpus,
    std::size_t min_count) {
  std::map<Emotion, AccuracyCell> table;
  for (const auto& j : JoinAnnotations(annotations, predictions, corpus)) {
    Count(table[j.emotion], j.correct);
  }
  std::erase_if(table, [&](const auto& kv) { return kv.second.n < min_count; });
  return table;
}

std::map<std::pair<GoldLabel, Polarity>, AccuracyCell> AccuracyByPolarityAndLabel(
    std::span<const EmotionAnnotation> annotations,
    std::span<const ScoreRecord> predictions, const Corpus& corpus) {
  std::map<std::pair<GoldLabel, Polarity>, AccuracyCell> table;
  for (GoldLabel g : {GoldLabel::kNonHateful, GoldLabel::kHateful}) {
    for (Polarity p : {Polarity::kNegative, Polarity::kAmbiguous, Polarity::kPositive}) {
      table[{g, p}] = AccuracyCell{};
    }
  }
  for (const auto& j : JoinAnnotations(annotations, predictions, corpus)) {
    Count(table[{j.test_case->gold, PolarityOf(j.emotion)}], j.correct);
  }
  return table;
}

std::string AnnotationsToJsonl(std::span<const EmotionAnnotation> annotations) {
  std::string out;
  for (const auto& a : annotations) {
    nlohmann::ordered_json j;
    j["case_id"] = a.case_id;
    j["emotion"] = EmotionName(a.emotion);
    j["raw_response"] = a.raw_response;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<EmotionAnnotation> AnnotationsFromJsonl(std::string_view text) {
  std::vector<EmotionAnnotation> out;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const auto j = nlohmann::json::parse(lines[i], nullptr, false);
    if (!j.is_object() || !j.contains("case_id") || !j["case_id"].is_string()) {
      throw Error(ErrorCode::kMalformedRow,
                  "annotations line " + std::to_string(i + 1) + " lacks case_id");
    }
    EmotionAnnotation a;
    a.case_id = j["case_id"].get<std::string>();
    a.raw_response = j.value("raw_response", "");
    if (j.contains("emotion") && j["emotion"].is_string()) {
      a.emotion = ParseEmotionResponse(j["emotion"].get<std::string>());
    } else {
      a.emotion = ParseEmotionResponse(a.raw_response);
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::string RepliesToJsonl(std::span<const LlmReply> replies) {
  std::string out;
  for (const auto& r : replies) {
    nlohmann::ordered_json j;
    j["case_id"] = r.case_id;
    j["response"] = r.response;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<LlmReply> RepliesFromJsonl(std::string_view text) {
  std::vector<LlmReply> out;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const auto j = nlohmann::json::parse(lines[i], nullptr, false);
    if (!j.is_object() || !j.contains("case_id") || !j["case_id"].is_string() ||
        !j.contains("response") || !j["response"].is_string()) {
      throw Error(ErrorCode::kMalformedRow, "replies line " + std::to_string(i + 1));
    }
    out.push_back({j["case_id"].get<std::string>(), j["response"].get<std::string>()});
  }
  return out;
}

std::string PromptBatchToJsonl(
    std::span<const std::pair<std::string, ChatPrompt>> prompts) {
  std::string out;
  for (const auto& [case_id, prompt] : prompts) {
    nlohmann::ordered_json j;
    j["case_id"] = case_id;
    j["system"] = prompt.system;
    j["user"] = prompt.user;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace hsaudit
