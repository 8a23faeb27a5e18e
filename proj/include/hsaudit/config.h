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


// Declarative run configuration, read from a TOML file. Relative paths are
// resolved against the directory of the config file. Credentials are never
// read from the file; only the names of the environment variables that hold
// them.

#ifndef HSAUDIT_CONFIG_H_
#define HSAUDIT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsaudit/adapters.h"
#include "hsaudit/corpus.h"

namespace hsaudit {

struct CorpusSpec {
  std::string name;
  std::filesystem::path path;
  CorpusFormat format = CorpusFormat::kGenericCsv;
};

enum class AnnotationMode { kEmitPrompts, kIngestResponses, kCallService };
std::optional<AnnotationMode> ParseAnnotationMode(std::string_view name);
std::string_view AnnotationModeName(AnnotationMode mode);

struct AnnotationConfig {
  AnnotationMode mode = AnnotationMode::kEmitPrompts;
  std::filesystem::path emotion_replies;     // kIngestResponses
  std::filesystem::path stereotype_replies;  // kIngestResponses
  std::string endpoint;                      // kCallService
  std::string model = "gpt-4o";
  std::string api_key_env = "ANNOTATOR_API_KEY";
  int parallelism = 4;
  double rate_limit = 5.0;
};

struct NliConfig {
  std::string endpoint;                 // empty: cached logits only
  std::filesystem::path seed_cache;     // optional pre-computed logits
  int parallelism = 4;
  double rate_limit = 20.0;
};

struct AnalysisConfig {
  bool bias = true;
  bool debias = true;
  bool annotate = true;
  bool scm = true;
  bool cluster = true;
  bool calibrate = true;
  bool metrics = true;
  int clusters = 10;
  int reliability_bins = 20;
  std::size_t top_stereotypes = 10;
  std::size_t min_emotion_count = 10;
};

struct RunConfig {
  std::filesystem::path config_path;
  std::string config_sha256;  // of the file bytes
  std::uint64_t seed = 42;
  std::filesystem::path out;
  std::string created_at;  // manifest timestamp; never the wall clock
  std::vector<CorpusSpec> corpora;
  std::string bias_corpus;
  std::string eval_corpus;
  std::vector<ClassifierConfig> classifiers;
  AnnotationConfig annotation;
  NliConfig nli;
  AnalysisConfig analysis;

  const CorpusSpec& FindCorpus(std::string_view name) const;
  // Throws Error(kConfigInvalid); checks that referenced files exist.
  void Validate() const;
};

// Throws Error(kConfigInvalid) on syntax errors, unknown keys, wrong types
// and failed validation, Error(kIoFailure) when the file cannot be read.
RunConfig LoadRunConfig(const std::filesystem::path& path);
RunConfig ParseRunConfig(std::string_view text, const std::filesystem::path& base_dir);

}  // namespace hsaudit

#endif  // HSAUDIT_CONFIG_H_
