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

#ifndef HSAUDIT_EMOTION_H_
#define HSAUDIT_EMOTION_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsaudit/adapters.h"
#include "hsaudit/corpus.h"

namespace hsaudit {

// The 27-label fine-grained emotion taxonomy, in prompt order, plus None.
enum class Emotion {
  kAdmiration,
  kAmusement,
  kApproval,
  kCaring,
  kDesire,
  kExcitement,
  kGratitude,
  kJoy,
  kLove,
  kOptimism,
  kPride,
  kRelief,
  kAnger,
  kAnnoyance,
  kDisappointment,
  kDisapproval,
  kDisgust,
  kEmbarrassment,
  kFear,
  kGrief,
  kNervousness,
  kRemorse,
  kSadness,
  kConfusion,
  kCuriosity,
  kRealization,
  kSurprise,
  kNone,
};

inline constexpr std::size_t kNumEmotions = 27;
std::span<const Emotion> AllEmotions();  // the 27 labels, without None

std::string_view EmotionName(Emotion e);         // "admiration", ..., "none"
std::string_view EmotionDisplayName(Emotion e);  // "Admiration", ...

enum class Polarity { kNegative = -1, kAmbiguous = 0, kPositive = 1 };

// Throws Error(kNoPolarityForNone) for Emotion::kNone.
Polarity PolarityOf(Emotion e);

struct EmotionAnnotation {
  std::string case_id;
  Emotion emotion = Emotion::kNone;
  std::string raw_response;
};

struct ChatPrompt {
  std::string system;
  std::string user;
};

// Emotion-labelling prompt; the message is inserted verbatim inside single
// quotes. The identity must have a surface string (not Other("none")).
ChatPrompt BuildEmotionPrompt(const TestCase& c);

// Strips whitespace, punctuation and quotes, lowercases, then matches the
// taxonomy ("nerveousness" is accepted for nervousness). "none" maps to
// Emotion::kNone. Throws Error(kParseFailure) for anything else.
Emotion ParseEmotionResponse(std::string_view raw);

enum class GroupBy { kIdentity, kFunctionality, kGold };

struct EmotionDistribution {
  // group label -> emotion -> count; None excluded.
  std::map<std::string, std::map<Emotion, std::size_t>> counts;
  std::size_t detected = 0;  // annotations with an emotion
  std::size_t total = 0;     // corpus size
};

EmotionDistribution ComputeEmotionDistribution(
    std::span<const EmotionAnnotation> annotations, const Corpus& corpus,
    GroupBy group_by);

struct AccuracyCell {
  std::optional<double> accuracy;  // nullopt when n == 0
  std::size_t n = 0;
  std::size_t correct = 0;
};

// Rows with fewer than min_count annotated cases are omitted.
std::map<Emotion, AccuracyCell> AccuracyByEmotion(
    std::span<const EmotionAnnotation> annotations,
    std::span<const ScoreRecord> predictions, const Corpus& corpus,
    std::size_t min_count = 10);

// Always six cells: {Hateful, NonHateful} x {-1, 0, +1}.
std::map<std::pair<GoldLabel, Polarity>, AccuracyCell> AccuracyByPolarityAndLabel(
    std::span<const EmotionAnnotation> annotations,
    std::span<const ScoreRecord> predictions, const Corpus& corpus);

// annotations.jsonl: {"case_id","emotion","raw_response"}
std::string AnnotationsToJsonl(std::span<const EmotionAnnotation> annotations);
std::vector<EmotionAnnotation> AnnotationsFromJsonl(std::string_view text);

// Raw chat replies awaiting parsing: {"case_id","response"} per line.
struct LlmReply {
  std::string case_id;
  std::string response;
};
std::string RepliesToJsonl(std::span<const LlmReply> replies);
std::vector<LlmReply> RepliesFromJsonl(std::string_view text);

// Offline prompt batch: {"case_id","system","user"} per line.
std::string PromptBatchToJsonl(
    std::span<const std::pair<std::string, ChatPrompt>> prompts);

}  // namespace hsaudit

#endif  // HSAUDIT_EMOTION_H_
