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


#include "hsaudit/synthetic.h"

#include <array>
#include <random>

#include "hsaudit/error.h"
#include "hsaudit/util.h"

namespace hsaudit {
namespace {

enum class Stance { kHateful, kSupportive, kCounter };

struct Pattern {
  std::string_view text;  // "{t}" marks the identity slot
  std::string_view functionality;
  Stance stance;
  std::string_view span;
  std::array<std::string_view, 2> emotions;
};

// Lexicon scores (no offset) range over 0.25 ... 0.8.
constexpr Pattern kPatterns[] = {
    {"I hate {t}.", "derog_neg_emote_h", Stance::kHateful, "hate", {"anger", "disgust"}},
    {"I think {t} are disgusting.", "derog_neg_attrib_h", Stance::kHateful,
     "are disgusting", {"disgust", "disapproval"}},
    {"To me {t} are vermin.", "derog_dehum_h", Stance::kHateful, "vermin",
     {"disgust", "anger"}},
    {"Honestly, {t} are a burden to all of us.", "derog_impl_h", Stance::kHateful,
     "a burden", {"annoyance", "disapproval"}},
    {"We should eradicate {t} now.", "threat_dir_h", Stance::kHateful, "eradicate",
     {"anger", "fear"}},
    {"I think {t} are parasites and vermin.", "derog_dehum_h", Stance::kHateful,
     "parasites and vermin", {"disgust", "anger"}},
    {"I hate {t}, they are scum and a burden.", "derog_neg_emote_h", Stance::kHateful,
     "scum and a burden", {"anger", "annoyance"}},
    {"Let us be clear, {t} are disgusting scum, vermin and parasites.",
     "derog_neg_attrib_h", Stance::kHateful, "disgusting scum", {"disgust", "anger"}},
    {"I love {t} and I hate anyone who insults them.", "ident_pos_nh",
     Stance::kSupportive, "love", {"love", "caring"}},
    {"I respect {t}; calling them vermin is wrong.", "counter_ref_nh", Stance::kSupportive,
     "respect", {"approval", "admiration"}},
    {"Saying {t} are scum is itself disgusting.", "counter_ref_nh", Stance::kCounter,
     "is itself disgusting", {"disapproval", "annoyance"}},
    {"If you say {t} are a burden, you are wrong.", "counter_ref_nh", Stance::kCounter,
     "are not a burden", {"disapproval", "confusion"}},
    {"\"{t} are parasites\" is a terrible thing to say.", "counter_quote_nh",
     Stance::kCounter, "a terrible thing to say", {"annoyance", "sadness"}},
    {"I admire {t} and I hate that people are disgusting to them.", "ident_pos_nh",
     Stance::kSupportive, "admire", {"admiration", "caring"}},
};

constexpr std::string_view kSuffixes[] = {"", " That is all.", " Make no mistake.",
                                          " Period.", " Plain and simple."};

std::string Instantiate(std::string_view pattern, const std::string& identity) {
  std::string out(pattern);
  const auto pos = out.find("{t}");
  out.replace(pos, 3, identity);
  return out;
}

TestCase MakeCase(const std::string& template_id, std::string text,
                  const TargetIdentity& identity, std::string_view functionality) {
  TestCase c;
  c.case_id = "syn-" + template_id + "-" + identity.Key();
  c.text = std::move(text);
  c.identity = identity;
  c.functionality = std::string(functionality);
  c.gold = LookupFunctionality(functionality)->gold;
  c.template_id = template_id;
  c.dataset = "synthetic";
  return c;
}

const Pattern& PatternOf(int template_index) {
  return kPatterns[static_cast<std::size_t>(template_index) % std::size(kPatterns)];
}

std::string Decorate(std::string_view word, std::mt19937_64& rng) {
  std::string w(word);
  switch (UniformIndex(rng, 4)) {
    case 0: return w;
    case 1:
      w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      return w;
    case 2: return w + ".";
    default: return "'" + w + "'";
  }
}

NliLogits PairLogits(double sign, double magnitude, bool positive_hypothesis,
                     std::mt19937_64& rng) {
  const double s = positive_hypothesis ? sign : -sign;
  return {s * magnitude + 0.3 * NormalDouble(rng), -s * magnitude + 0.3 * NormalDouble(rng),
          0.3 * NormalDouble(rng)};
}

}  // namespace

std::map<TargetIdentity, double> SyntheticOffsets() {
  return {{TargetIdentity(IdentityKind::kWomen), -0.15},
          {TargetIdentity(IdentityKind::kBlackPeople), 0.20}};
}

Corpus MakeTemplateCorpus(const SyntheticOptions& options) {
  const int max_templates =
      static_cast<int>(std::size(kPatterns) * std::size(kSuffixes));
  if (options.templates < 1 || options.templates > max_templates) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic corpus supports 1.." + std::to_string(max_templates) +
                    " templates");
  }
  std::vector<TestCase> cases;
  for (int t = 0; t < options.templates; ++t) {
    const Pattern& p = PatternOf(t);
    const std::string_view suffix =
        kSuffixes[static_cast<std::size_t>(t) / std::size(kPatterns)];
    const std::string id = std::to_string(t + 1);
    for (IdentityKind kind : kNamedIdentities) {
      const TargetIdentity identity(kind);
      cases.push_back(MakeCase(
          id, Instantiate(p.text, identity.SurfaceString()) + std::string(suffix),
          identity, p.functionality));
    }
  }
  if (options.extras) {
    const std::string slur_id = std::to_string(options.templates + 1);
    const std::string partial_id = std::to_string(options.templates + 2);
    for (IdentityKind kind : kNamedIdentities) {
      const TargetIdentity identity(kind);
      cases.push_back(MakeCase(slur_id,
                               "Those " + identity.SurfaceString() + " are such trash.",
                               identity, "slur_h"));
      if (kind != IdentityKind::kImmigrants) {
        cases.push_back(MakeCase(
            partial_id, Instantiate(kPatterns[0].text, identity.SurfaceString()) + " Truly.",
            identity, kPatterns[0].functionality));
      }
    }
    const std::pair<std::string_view, std::string_view> untargeted[] = {
        {"I hate this disgusting weather.", "target_obj_nh"},
        {"You are disgusting, Mark.", "target_indiv_nh"},
        {"I hate people who cut in line.", "target_group_nh"},
    };
    int n = 0;
    for (const auto& [text, functionality] : untargeted) {
      TestCase c;
      c.case_id = "syn-none-" + std::to_string(++n);
      c.text = std::string(text);
      c.identity = TargetIdentity::None();
      c.functionality = std::string(functionality);
      c.gold = LookupFunctionality(functionality)->gold;
      c.dataset = "synthetic";
      cases.push_back(std::move(c));
    }
  }
  return Corpus("synthetic", std::move(cases));
}

SyntheticData MakeSyntheticData(const SyntheticOptions& options) {
  SyntheticData data;
  data.corpus = MakeTemplateCorpus(options);
  std::mt19937_64 rng(options.seed);
  bool planted_failure = false;
  for (const auto& c : data.corpus.cases()) {
    if (c.identity.is_none()) continue;
    const int t = c.template_id ? std::stoi(*c.template_id) - 1 : 0;
    const Pattern& p = t < options.templates ? PatternOf(t) : kPatterns[0];

    std::string emotion;
    if (!planted_failure && p.stance == Stance::kHateful && t >= 6) {
      emotion = "anger and disgust";  // not a single label
      planted_failure = true;
    } else if (UniformDouble(rng) < 0.08) {
      emotion = "None";
    } else {
      emotion = Decorate(p.emotions[UniformIndex(rng, 2)], rng);
    }
    data.emotion_replies.push_back({c.case_id, emotion});

    const bool no_span = p.stance == Stance::kCounter && UniformDouble(rng) < 0.3;
    data.stereotype_replies.push_back(
        {c.case_id, no_span ? "None" : "\"" + std::string(p.span) + "\""});

    double sign = p.stance == Stance::kHateful ? -1.0 : 1.0;
    double magnitude = 1.5 + 1.5 * UniformDouble(rng);
    if (p.stance == Stance::kCounter) {
      sign = UniformDouble(rng) < 0.5 ? -1.0 : 1.0;
      magnitude = 0.4 * UniformDouble(rng);
    }
    data.nli.push_back({c.case_id, HypothesisKind::kWarmthPos,
                        PairLogits(sign, magnitude, true, rng)});
    data.nli.push_back({c.case_id, HypothesisKind::kWarmthNeg,
                        PairLogits(sign, magnitude, false, rng)});
    const double c_magnitude = magnitude * (0.5 + 0.5 * UniformDouble(rng));
    data.nli.push_back({c.case_id, HypothesisKind::kCompetencePos,
                        PairLogits(sign, c_magnitude, true, rng)});
    data.nli.push_back({c.case_id, HypothesisKind::kCompetenceNeg,
                        PairLogits(sign, c_magnitude, false, rng)});
  }
  return data;
}

void WriteSyntheticData(const SyntheticData& data, const std::filesystem::path& dir) {
  WriteFile(dir / "corpus.csv", SerializeGenericCsv(data.corpus));
  WriteFile(dir / "emotion_replies.jsonl", RepliesToJsonl(data.emotion_replies));
  WriteFile(dir / "stereotype_replies.jsonl", RepliesToJsonl(data.stereotype_replies));
  WriteFile(dir / "nli_logits.jsonl", NliRecordsToJsonl(data.nli));
  WriteFile(dir / "config.toml", R"(# Offline audit over the synthetic template corpus.

[run]
seed = 42
out = "out"
created_at = "2026-01-01T00:00:00Z"

[[corpus]]
name = "synthetic"
path = "corpus.csv"
format = "generic_csv"

[bias]
corpus = "synthetic"

[eval]
corpus = "synthetic"

[[classifier]]
model_id = "lexicon-planted"
backend = "builtin_lexicon"
threshold = 0.5

[classifier.offsets]
women = -0.15
black_people = 0.20

[[classifier]]
model_id = "lexicon-clean"
backend = "builtin_lexicon"
threshold = 0.5

[annotation]
mode = "ingest_responses"
emotion_replies = "emotion_replies.jsonl"
stereotype_replies = "stereotype_replies.jsonl"

[nli]
endpoint = ""
seed_cache = "nli_logits.jsonl"

[analysis]
clusters = 10
reliability_bins = 20
top_stereotypes = 10
min_emotion_count = 10
)");
}

}  // namespace hsaudit
