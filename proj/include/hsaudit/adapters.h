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

// Classifier and NLI backends. Downstream analysis only ever sees
// ScoreRecord / NliRecord values; where they came from (a remote attribute
// API, an HTTP scoring service, a cache file or the built-in lexicon) is
// decided here.

#ifndef HSAUDIT_ADAPTERS_H_
#define HSAUDIT_ADAPTERS_H_

#include <array>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsaudit/corpus.h"
#include "hsaudit/identity.h"
#include "hsaudit/transport.h"

namespace hsaudit {

enum class Backend {
  kRemoteAttributeApi,
  kHttpScoringService,
  kCacheFile,
  kBuiltinLexicon,
};

std::optional<Backend> ParseBackend(std::string_view name);
std::string_view BackendName(Backend backend);

inline constexpr char kDefaultAttributeEndpoint[] =
    "https://commentanalyzer.googleapis.com/v1alpha1/comments:analyze";

struct ClassifierConfig {
  std::string model_id;
  Backend backend = Backend::kBuiltinLexicon;
  std::optional<std::string> attribute;  // e.g. "IDENTITY_ATTACK"
  double threshold = 0.5;
  std::string endpoint;
  // Name of the environment variable holding the credential. Secrets never
  // live in config files.
  std::string api_key_env = "SCORER_API_KEY";
  double rate_limit = 10.0;  // requests per second
  int parallelism = 4;       // max in-flight requests
  std::size_t batch_size = 32;
  std::filesystem::path cache_path;  // kCacheFile source
  std::map<TargetIdentity, double> offsets;  // kBuiltinLexicon
  std::string snapshot_date;  // surfaced in reports next to model_id

  // Throws Error(kConfigInvalid).
  void Validate() const;
};

struct ScoreRecord {
  std::string model_id;
  std::string case_id;
  double score = 0.0;
  GoldLabel label = GoldLabel::kNonHateful;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

// label = Hateful iff score >= threshold.
ScoreRecord MakeScoreRecord(std::string model_id, std::string case_id,
                            double score, double threshold);

// Stage output: {"model_id","case_id","score","label"} per line.
std::string ScoreRecordsToJsonl(std::span<const ScoreRecord> records);
std::vector<ScoreRecord> ScoreRecordsFromJsonl(std::string_view text);

enum class HypothesisKind {
  kWarmthPos,
  kWarmthNeg,
  kCompetencePos,
  kCompetenceNeg,
};
inline constexpr std::array<HypothesisKind, 4> kHypothesisKinds = {
    HypothesisKind::kWarmthPos, HypothesisKind::kWarmthNeg,
    HypothesisKind::kCompetencePos, HypothesisKind::kCompetenceNeg};
std::string_view HypothesisKindName(HypothesisKind kind);  // "warmth_pos", ...
std::optional<HypothesisKind> ParseHypothesisKind(std::string_view name);

struct NliLogits {
  double entail = 0.0;
  double contradict = 0.0;
  double neutral = 0.0;
  friend bool operator==(const NliLogits&, const NliLogits&) = default;
};

struct NliRecord {
  std::string case_id;
  HypothesisKind kind = HypothesisKind::kWarmthPos;
  NliLogits logits;
};

// Append-only JSON-lines store for classifier scores; lines are
// {"model_id","case_id","score"}. Inserting an existing key is a no-op.
// When backed by a file, new entries are appended as they arrive; a line
// that does not parse makes Open() throw Error(kIncompleteCache).
class ScoreCache {
 public:
  ScoreCache() = default;  // memory only
  ScoreCache(ScoreCache&& other) noexcept
      : path_(std::move(other.path_)), entries_(std::move(other.entries_)) {}
  static ScoreCache Open(const std::filesystem::path& path);

  std::optional<double> Lookup(std::string_view model_id,
                               std::string_view case_id) const;
  // Returns false when the key was already present.
  bool Insert(const std::string& model_id, const std::string& case_id,
              double score);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::filesystem::path path_;
  std::map<std::pair<std::string, std::string>, double, std::less<>> entries_;
};

// Same contract for NLI logits; lines are {"case_id","kind","logits":[e,c,n]}.
class NliCache {
 public:
  NliCache() = default;
  NliCache(NliCache&& other) noexcept
      : path_(std::move(other.path_)), entries_(std::move(other.entries_)) {}
  static NliCache Open(const std::filesystem::path& path);
  // Loads entries from another file without making it the append target.
  void Import(const std::filesystem::path& path);

  std::optional<NliLogits> Lookup(std::string_view case_id,
                                  HypothesisKind kind) const;
  bool Insert(const std::string& case_id, HypothesisKind kind,
              const NliLogits& logits);
  std::size_t size() const;

 private:
  void Load(const std::filesystem::path& path);

  mutable std::mutex mu_;
  std::filesystem::path path_;
  std::map<std::pair<std::string, HypothesisKind>, NliLogits> entries_;
};

// NliCache line format, one record per line.
std::string NliRecordsToJsonl(std::span<const NliRecord> records);

// Exponential backoff: attempt, then wait base, 2*base, 4*base... between
// up to max_retries further attempts.
struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{1000};
  std::function<void(std::chrono::milliseconds)> sleep;  // default: real sleep
};

// Blocking token bucket shared by the workers of one fan-out.
class TokenBucket {
 public:
  TokenBucket(double rate_per_second, double burst);
  void Acquire();

 private:
  std::mutex mu_;
  double rate_;
  double burst_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
};

// Runs work(i) for i in [0, n) on up to `parallelism` threads, each call
// preceded by a token-bucket acquire. The first exception stops the hand-out
// of new units; it is rethrown after all workers join, together with the
// indices that never completed.
struct FanOutFailure {
  std::exception_ptr error;
  std::vector<std::size_t> incomplete;
};
std::optional<FanOutFailure> RunFanOut(std::size_t n, int parallelism,
                                       double rate_per_second,
                                       const std::function<void(std::size_t)>& work);

// One ScoreRecord per case, in input order. Cache-first: only misses reach
// the backend. Partial results are never returned.
std::vector<ScoreRecord> ScoreCases(const ClassifierConfig& config,
                                    std::span<const TestCase> cases,
                                    ScoreCache& cache, HttpTransport& transport,
                                    const RetryPolicy& retry = {});

// Raw logits from an /v1/nli endpoint; no normalisation.
NliLogits NliScore(HttpTransport& transport, const std::string& endpoint,
                   const std::string& premise, const std::string& hypothesis,
                   const RetryPolicy& retry = {});

struct NliRequest {
  std::string case_id;
  HypothesisKind kind;
  std::string premise;
  std::string hypothesis;
};
struct NliFetchOptions {
  std::string endpoint;  // empty: cache only
  int parallelism = 4;
  double rate_limit = 20.0;
  RetryPolicy retry;
};
// Cache-first batch NLI scoring; returns records in request order.
std::vector<NliRecord> FetchNliLogits(std::span<const NliRequest> requests,
                                      NliCache& cache, HttpTransport& transport,
                                      const NliFetchOptions& options);

// OpenAI-compatible chat completion (POST {endpoint}/v1/chat/completions);
// returns choices[0].message.content.
std::string CompleteChat(HttpTransport& transport, const std::string& endpoint,
                         const std::string& model, const std::string& system,
                         const std::string& user, const std::string& api_key,
                         const RetryPolicy& retry = {});

// Deterministic synthetic classifier:
//   clamp01(0.10 + 0.40[H>=1] + 0.10 min(H-1,3)[H>=2] - 0.25[P>=1] + offset)
// where H and P count whole-word, case-insensitive hits of the fixed hate and
// positive term lists.
double BuiltinLexiconScore(std::string_view text, const TargetIdentity& identity,
                           const std::map<TargetIdentity, double>& offsets);

std::span<const std::string_view> LexiconHateTerms();
std::span<const std::string_view> LexiconPositiveTerms();

}  // namespace hsaudit

#endif  // HSAUDIT_ADAPTERS_H_
