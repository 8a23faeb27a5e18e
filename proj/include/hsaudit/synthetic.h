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


// Deterministic synthetic audit data: a templated corpus whose lexicon
// scores never saturate, plus matching LLM replies and NLI logits so that a
// full pipeline run needs no network access.

#ifndef HSAUDIT_SYNTHETIC_H_
#define HSAUDIT_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hsaudit/adapters.h"
#include "hsaudit/corpus.h"
#include "hsaudit/emotion.h"

namespace hsaudit {

struct SyntheticOptions {
  int templates = 50;
  std::uint64_t seed = 42;
  // Adds one slur-functionality template, one template missing an identity
  // and a few rows without a target identity.
  bool extras = false;
};

// Each template's lexicon score lies in [0.25, 0.8], so any offset in
// [-0.25, 0.2] is applied without clamping.
Corpus MakeTemplateCorpus(const SyntheticOptions& options);

// The offsets planted by the synthetic configuration.
std::map<TargetIdentity, double> SyntheticOffsets();

struct SyntheticData {
  Corpus corpus;
  std::vector<LlmReply> emotion_replies;
  std::vector<LlmReply> stereotype_replies;
  std::vector<NliRecord> nli;
};

SyntheticData MakeSyntheticData(const SyntheticOptions& options);

// Writes corpus.csv, emotion_replies.jsonl, stereotype_replies.jsonl,
// nli_logits.jsonl and config.toml into dir.
void WriteSyntheticData(const SyntheticData& data, const std::filesystem::path& dir);

}  // namespace hsaudit

#endif  // HSAUDIT_SYNTHETIC_H_
