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

#include "hsaudit/adapters.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "json.hpp"

#include "hsaudit/error.h"
#include "hsaudit/util.h"

namespace hsaudit {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kHateTerms[] = {
    "hate", "disgusting", "scum", "vermin", "eradicate", "burden", "parasites"};
constexpr std::string_view kPositiveTerms[] = {"love", "admire", "proud",
                                                "respect", "celebrate"};

void AppendLine(const std::filesystem::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot append to " + path.string());
  out << line << '\n';
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

void PrepareCacheFile(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
}

bool IsValidScore(double s) { return std::isfinite(s) && s >= 0.0 && s <= 1.0; }

// Outcome of one HTTP exchange after retries.
json PostWithRetry(HttpTransport& transport, const HttpRequest& request,
                   const RetryPolicy& retry, const std::string& what) {
  auto sleep = retry.sleep ? retry.sleep : [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };
  HttpResponse last;
  for (int attempt = 0;; ++attempt) {
    last = transport.PostJson(request);
    const bool transient = last.status == 0 || last.status == 429 ||
                           last.status >= 500;
    if (!transient) break;
    if (attempt >= retry.max_retries) {
      const std::string detail =
          last.status == 0 ? last.transport_error
                           : "HTTP " + std::to_string(last.status) + " " + last.body;
      throw Error(last.status == 429 ? ErrorCode::kQuotaExceeded
                                     : ErrorCode::kBackendUnavailable,
                  what + " failed after " + std::to_string(attempt + 1) +
                      " attempts: " + detail);
    }
    sleep(retry.base_delay * (1 << attempt));
  }
  if (last.status < 200 || last.status >= 300) {
    throw Error(ErrorCode::kBackendUnavailable,
                what + " rejected with HTTP " + std::to_string(last.status) +
                    ": " + last.body);
  }
  json body = json::parse(last.body, nullptr, /*allow_exceptions=*/false);
  if (body.is_discarded()) {
    throw Error(ErrorCode::kMalformedResponse, what + " returned non-JSON body");
  }
  return body;
}

double ParseAttributeScore(const json& body, const std::string& attribute) {
  const json* node = &body;
  for (const char* key : {"attributeScores", attribute.c_str(), "summaryScore",
                          "value"}) {
    if (!node->is_object() || !node->contains(key)) {
      throw Error(ErrorCode::kMalformedResponse,
                  "attribute response lacks '" + std::string(key) + "'");
    }
    node = &(*node)[key];
  }
  if (!node->is_number()) {
    throw Error(ErrorCode::kMalformedResponse, "attribute score is not a number");
  }
  return node->get<double>();
}

std::string UnscoredList(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ", ";
    out += ids[i];
  }
  return out;
}

[[noreturn]] void RethrowWithCases(const FanOutFailure& failure,
                                   const std::vector<std::string>& ids) {
  try {
    std::rethrow_exception(failure.error);
  } catch (const Error& e) {
    throw Error(e.code(), e.detail() + "; unscored case_ids: " + UnscoredList(ids));
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kBackendUnavailable,
                std::string(e.what()) + "; unscored case_ids: " + UnscoredList(ids));
  }
}

std::string NliLine(const std::string& case_id, HypothesisKind kind,
                    const NliLogits& logits) {
  ordered_json line;
  line["case_id"] = case_id;
  line["kind"] = HypothesisKindName(kind);
  line["logits"] = {logits.entail, logits.contradict, logits.neutral};
  return line.dump();
}

}  // namespace

std::optional<Backend> ParseBackend(std::string_view name) {
  const std::string lower = ToLower(Trim(name));
  if (lower == "remote_attribute_api") return Backend::kRemoteAttributeApi;
  if (lower == "http_scoring_service") return Backend::kHttpScoringService;
  if (lower == "cache_file") return Backend::kCacheFile;
  if (lower == "builtin_lexicon") return Backend::kBuiltinLexicon;
  return std::nullopt;
}

std::string_view BackendName(Backend backend) {
  switch (backend) {
    case Backend::kRemoteAttributeApi: return "remote_attribute_api";
    case Backend::kHttpScoringService: return "http_scoring_service";
    case Backend::kCacheFile: return "cache_file";
    case Backend::kBuiltinLexicon: return "builtin_lexicon";
  }
  return "";
}

void ClassifierConfig::Validate() const {
  auto fail = [this](const std::string& msg) {
    throw Error(ErrorCode::kConfigInvalid, "classifier '" + model_id + "': " + msg);
  };
  if (model_id.empty()) fail("model_id is empty");
  if (!(threshold > 0.0 && threshold < 1.0)) fail("threshold must lie in (0,1)");
  if (!(rate_limit > 0.0)) fail("rate_limit must be > 0");
  if (parallelism < 1) fail("parallelism must be >= 1");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (backend == Backend::kHttpScoringService && endpoint.empty()) {
    fail("http_scoring_service needs an endpoint");
  }
  if (backend == Backend::kRemoteAttributeApi && !attribute) {
    fail("remote_attribute_api needs an attribute");
  }
  if (backend == Backend::kCacheFile && cache_path.empty()) {
    fail("cache_file backend needs a cache path");
  }
}

ScoreRecord MakeScoreRecord(std::string model_id, std::string case_id,
                            double score, double threshold) {
  return {std::move(model_id), std::move(case_id), score,
          score >= threshold ? GoldLabel::kHateful : GoldLabel::kNonHateful};
}

std::string ScoreRecordsToJsonl(std::span<const ScoreRecord> records) {
  std::string out;
  for (const auto& r : records) {
    ordered_json j;
    j["model_id"] = r.model_id;
    j["case_id"] = r.case_id;
    j["score"] = r.score;
    j["label"] = GoldLabelName(r.label);
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<ScoreRecord> ScoreRecordsFromJsonl(std::string_view text) {
  std::vector<ScoreRecord> out;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const json j = json::parse(lines[i], nullptr, false);
    std::optional<GoldLabel> label;
    if (j.is_object() && j.contains("label") && j["label"].is_string()) {
      label = ParseGoldLabel(j["label"].get<std::string>());
    }
    if (!label || !j.contains("model_id") || !j["model_id"].is_string() ||
        !j.contains("case_id") || !j["case_id"].is_string() || !j.contains("score") ||
        !j["score"].is_number() || !IsValidScore(j["score"].get<double>())) {
      throw Error(ErrorCode::kMalformedRow, "score records line " + std::to_string(i + 1));
    }
    out.push_back({j["model_id"].get<std::string>(), j["case_id"].get<std::string>(),
                   j["score"].get<double>(), *label});
  }
  return out;
}

std::string_view HypothesisKindName(HypothesisKind kind) {
  switch (kind) {
    case HypothesisKind::kWarmthPos: return "warmth_pos";
    case HypothesisKind::kWarmthNeg: return "warmth_neg";
    case HypothesisKind::kCompetencePos: return "competence_pos";
    case HypothesisKind::kCompetenceNeg: return "competence_neg";
  }
  return "";
}

std::optional<HypothesisKind> ParseHypothesisKind(std::string_view name) {
  for (HypothesisKind k : kHypothesisKinds) {
    if (HypothesisKindName(k) == name) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- caches

ScoreCache ScoreCache::Open(const std::filesystem::path& path) {
  ScoreCache cache;
  PrepareCacheFile(path);
  cache.path_ = path;
  if (!std::filesystem::exists(path)) return cache;
  const std::vector<std::string> lines = SplitLines(ReadFile(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const json j = json::parse(lines[i], nullptr, false);
    const bool ok = j.is_object() && j.contains("model_id") &&
                    j["model_id"].is_string() && j.contains("case_id") &&
                    j["case_id"].is_string() && j.contains("score") &&
                    j["score"].is_number() && IsValidScore(j["score"].get<double>());
    if (!ok) {
      throw Error(ErrorCode::kIncompleteCache,
                  path.string() + " line " + std::to_string(i + 1) +
                      " is not a valid score record");
    }
    cache.entries_.emplace(
        std::make_pair(j["model_id"].get<std::string>(), j["case_id"].get<std::string>()),
        j["score"].get<double>());
  }
  return cache;
}

std::optional<double> ScoreCache::Lookup(std::string_view model_id,
                                         std::string_view case_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(std::make_pair(std::string(model_id), std::string(case_id)));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool ScoreCache::Insert(const std::string& model_id, const std::string& case_id,
                        double score) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!entries_.emplace(std::make_pair(model_id, case_id), score).second) return false;
  if (!path_.empty()) {
    ordered_json line;
    line["model_id"] = model_id;
    line["case_id"] = case_id;
    line["score"] = score;
    AppendLine(path_, line.dump());
  }
  return true;
}

std::size_t ScoreCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

NliCache NliCache::Open(const std::filesystem::path& path) {
  NliCache cache;
  PrepareCacheFile(path);
  cache.path_ = path;
  if (std::filesystem::exists(path)) cache.Load(path);
  return cache;
}

void NliCache::Import(const std::filesystem::path& path) { Load(path); }

void NliCache::Load(const std::filesystem::path& path) {
  const std::vector<std::string> lines = SplitLines(ReadFile(path));
  std::lock_guard<std::mutex> lock(mu_);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const json j = json::parse(lines[i], nullptr, false);
    std::optional<HypothesisKind> kind;
    bool ok = j.is_object() && j.contains("case_id") && j["case_id"].is_string() &&
              j.contains("kind") && j["kind"].is_string() && j.contains("logits") &&
              j["logits"].is_array() && j["logits"].size() == 3;
    if (ok) {
      kind = ParseHypothesisKind(j["kind"].get<std::string>());
      ok = kind.has_value();
      for (const auto& v : j["logits"]) ok = ok && v.is_number();
    }
    if (!ok) {
      throw Error(ErrorCode::kIncompleteCache,
                  path.string() + " line " + std::to_string(i + 1) +
                      " is not a valid NLI record");
    }
    const auto& l = j["logits"];
    entries_.emplace(std::make_pair(j["case_id"].get<std::string>(), *kind),
                     NliLogits{l[0].get<double>(), l[1].get<double>(), l[2].get<double>()});
  }
}

std::optional<NliLogits> NliCache::Lookup(std::string_view case_id,
                                          HypothesisKind kind) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(std::make_pair(std::string(case_id), kind));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool NliCache::Insert(const std::string& case_id, HypothesisKind kind,
                      const NliLogits& logits) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!entries_.emplace(std::make_pair(case_id, kind), logits).second) return false;
  if (!path_.empty()) AppendLine(path_, NliLine(case_id, kind, logits));
  return true;
}

std::string NliRecordsToJsonl(std::span<const NliRecord> records) {
  std::string out;
  for (const auto& r : records) out += NliLine(r.case_id, r.kind, r.logits) + "\n";
  return out;
}

std::size_t NliCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

// ---------------------------------------------------------------- fan-out

TokenBucket::TokenBucket(double rate_per_second, double burst)
    : rate_(rate_per_second),
      burst_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      last_(std::chrono::steady_clock::now()) {}

void TokenBucket::Acquire() {
  for (;;) {
    std::chrono::duration<double> wait{};
    {
      std::lock_guard<std::mutex> lock(mu_);
      const auto now = std::chrono::steady_clock::now();
      const double elapsed = std::chrono::duration<double>(now - last_).count();
      tokens_ = std::min(burst_, tokens_ + elapsed * rate_);
      last_ = now;
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
    }
    std::this_thread::sleep_for(wait);
  }
}

std::optional<FanOutFailure> RunFanOut(
    std::size_t n, int parallelism, double rate_per_second,
    const std::function<void(std::size_t)>& work) {
  if (n == 0) return std::nullopt;
  TokenBucket bucket(rate_per_second, static_cast<double>(parallelism));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::exception_ptr first_error;
  std::vector<bool> done(n, false);

  auto worker = [&] {
    for (;;) {
      if (stop.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      bucket.Acquire();
      try {
        work(i);
        std::lock_guard<std::mutex> lock(mu);
        done[i] = true;
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        stop.store(true);
      }
    }
  };

  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, parallelism)));
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (!first_error) return std::nullopt;
  FanOutFailure failure{first_error, {}};
  for (std::size_t i = 0; i < n; ++i) {
    if (!done[i]) failure.incomplete.push_back(i);
  }
  return failure;
}

// ---------------------------------------------------------------- scoring

std::vector<ScoreRecord> ScoreCases(const ClassifierConfig& config,
                                    std::span<const TestCase> cases,
                                    ScoreCache& cache, HttpTransport& transport,
                                    const RetryPolicy& retry) {
  config.Validate();
  std::vector<std::size_t> misses;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (!cache.Lookup(config.model_id, cases[i].case_id)) misses.push_back(i);
  }

  if (!misses.empty()) {
    switch (config.backend) {
      case Backend::kBuiltinLexicon:
        for (std::size_t i : misses) {
          cache.Insert(config.model_id, cases[i].case_id,
                       BuiltinLexiconScore(cases[i].text, cases[i].identity,
                                           config.offsets));
        }
        break;

      case Backend::kCacheFile: {
        // Only Lookup() is used, so the source file is never appended to.
        const ScoreCache source = ScoreCache::Open(config.cache_path);
        std::vector<std::string> missing;
        for (std::size_t i : misses) {
          if (auto s = source.Lookup(config.model_id, cases[i].case_id)) {
            cache.Insert(config.model_id, cases[i].case_id, *s);
          } else {
            missing.push_back(cases[i].case_id);
          }
        }
        if (!missing.empty()) {
          throw Error(ErrorCode::kIncompleteCache,
                      "cache file " + config.cache_path.string() + " has no score for model '" +
                          config.model_id + "'; unscored case_ids: " +
                          UnscoredList(missing));
        }
        break;
      }

      case Backend::kHttpScoringService: {
        const std::size_t chunks = (misses.size() + config.batch_size - 1) / config.batch_size;
        auto failure = RunFanOut(chunks, config.parallelism, config.rate_limit,
                                 [&](std::size_t chunk) {
          const std::size_t begin = chunk * config.batch_size;
          const std::size_t end = std::min(misses.size(), begin + config.batch_size);
          ordered_json body;
          body["model_id"] = config.model_id;
          body["texts"] = json::array();
          for (std::size_t k = begin; k < end; ++k) {
            body["texts"].push_back(cases[misses[k]].text);
          }
          HttpRequest req{JoinUrl(config.endpoint, "/v1/score"), body.dump(), {}};
          const json resp = PostWithRetry(transport, req, retry,
                                          "scoring '" + config.model_id + "'");
          if (!resp.is_object() || !resp.contains("scores") ||
              !resp["scores"].is_array() || resp["scores"].size() != end - begin) {
            throw Error(ErrorCode::kMalformedResponse,
                        "/v1/score response lacks a scores array of length " +
                            std::to_string(end - begin));
          }
          for (std::size_t k = begin; k < end; ++k) {
            const json& s = resp["scores"][k - begin];
            if (!s.is_number() || !IsValidScore(s.get<double>())) {
              throw Error(ErrorCode::kMalformedResponse,
                          "score for case '" + cases[misses[k]].case_id +
                              "' is not a number in [0,1]");
            }
          }
          for (std::size_t k = begin; k < end; ++k) {
            cache.Insert(config.model_id, cases[misses[k]].case_id,
                         resp["scores"][k - begin].get<double>());
          }
        });
        if (failure) {
          std::vector<std::string> ids;
          for (std::size_t chunk : failure->incomplete) {
            const std::size_t begin = chunk * config.batch_size;
            const std::size_t end = std::min(misses.size(), begin + config.batch_size);
            for (std::size_t k = begin; k < end; ++k) ids.push_back(cases[misses[k]].case_id);
          }
          RethrowWithCases(*failure, ids);
        }
        break;
      }

      case Backend::kRemoteAttributeApi: {
        const std::string endpoint =
            config.endpoint.empty() ? kDefaultAttributeEndpoint : config.endpoint;
        std::string url = endpoint;
        if (const char* key = std::getenv(config.api_key_env.c_str());
            key != nullptr && *key != '\0') {
          url += (url.find('?') == std::string::npos ? "?key=" : "&key=");
          url += key;
        }
        const std::string& attribute = *config.attribute;
        auto failure = RunFanOut(misses.size(), config.parallelism, config.rate_limit,
                                 [&](std::size_t k) {
          const TestCase& c = cases[misses[k]];
          ordered_json body;
          body["comment"] = {{"text", c.text}};
          body["languages"] = {"en"};
          body["requestedAttributes"] = ordered_json::object();
          body["requestedAttributes"][attribute] = ordered_json::object();
          body["doNotStore"] = true;
          HttpRequest req{url, body.dump(), {}};
          const json resp = PostWithRetry(transport, req, retry,
                                          "attribute request for case '" + c.case_id + "'");
          const double score = ParseAttributeScore(resp, attribute);
          if (!IsValidScore(score)) {
            throw Error(ErrorCode::kMalformedResponse,
                        "attribute score for case '" + c.case_id + "' outside [0,1]");
          }
          cache.Insert(config.model_id, c.case_id, score);
        });
        if (failure) {
          std::vector<std::string> ids;
          for (std::size_t k : failure->incomplete) ids.push_back(cases[misses[k]].case_id);
          RethrowWithCases(*failure, ids);
        }
        break;
      }
    }
  }

  std::vector<ScoreRecord> records;
  records.reserve(cases.size());
  for (const auto& c : cases) {
    const std::optional<double> s = cache.Lookup(config.model_id, c.case_id);
    if (!s) {
      throw Error(ErrorCode::kIncompleteCache,
                  "no score for case '" + c.case_id + "' after scoring");
    }
    records.push_back(MakeScoreRecord(config.model_id, c.case_id, *s, config.threshold));
  }
  return records;
}

NliLogits NliScore(HttpTransport& transport, const std::string& endpoint,
                   const std::string& premise, const std::string& hypothesis,
                   const RetryPolicy& retry) {
  ordered_json body;
  body["premise"] = premise;
  body["hypothesis"] = hypothesis;
  HttpRequest req{JoinUrl(endpoint, "/v1/nli"), body.dump(), {}};
  const json resp = PostWithRetry(transport, req, retry, "NLI request");
  if (!resp.is_object() || !resp.contains("logits") || !resp["logits"].is_object()) {
    throw Error(ErrorCode::kMalformedResponse, "/v1/nli response lacks a logits object");
  }
  const json& l = resp["logits"];
  for (const char* k : {"entail", "contradict", "neutral"}) {
    if (!l.contains(k) || !l[k].is_number()) {
      throw Error(ErrorCode::kMalformedResponse,
                  "/v1/nli logits lack numeric '" + std::string(k) + "'");
    }
  }
  return {l["entail"].get<double>(), l["contradict"].get<double>(),
          l["neutral"].get<double>()};
}

std::vector<NliRecord> FetchNliLogits(std::span<const NliRequest> requests,
                                      NliCache& cache, HttpTransport& transport,
                                      const NliFetchOptions& options) {
  std::vector<std::size_t> misses;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    if (!cache.Lookup(requests[i].case_id, requests[i].kind)) misses.push_back(i);
  }
  auto miss_ids = [&](const std::vector<std::size_t>& which) {
    std::vector<std::string> ids;
    for (std::size_t k : which) {
      const NliRequest& r = requests[misses[k]];
      ids.push_back(r.case_id + "/" + std::string(HypothesisKindName(r.kind)));
    }
    return ids;
  };
  if (!misses.empty()) {
    if (options.endpoint.empty()) {
      std::vector<std::size_t> all(misses.size());
      for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
      throw Error(ErrorCode::kIncompleteCache,
                  "NLI cache incomplete and no endpoint configured; missing: " +
                      UnscoredList(miss_ids(all)));
    }
    auto failure = RunFanOut(misses.size(), options.parallelism, options.rate_limit,
                             [&](std::size_t k) {
      const NliRequest& r = requests[misses[k]];
      cache.Insert(r.case_id, r.kind,
                   NliScore(transport, options.endpoint, r.premise, r.hypothesis,
                            options.retry));
    });
    if (failure) RethrowWithCases(*failure, miss_ids(failure->incomplete));
  }
  std::vector<NliRecord> out;
  out.reserve(requests.size());
  for (const auto& r : requests) {
    out.push_back({r.case_id, r.kind, *cache.Lookup(r.case_id, r.kind)});
  }
  return out;
}

std::string CompleteChat(HttpTransport& transport, const std::string& endpoint,
                         const std::string& model, const std::string& system,
                         const std::string& user, const std::string& api_key,
                         const RetryPolicy& retry) {
  ordered_json body;
  body["model"] = model;
  body["temperature"] = 0;
  body["messages"] = ordered_json::array(
      {{{"role", "system"}, {"content", system}}, {{"role", "user"}, {"content", user}}});
  HttpRequest req{JoinUrl(endpoint, "/v1/chat/completions"), body.dump(), {}};
  if (!api_key.empty()) req.headers["Authorization"] = "Bearer " + api_key;
  const json resp = PostWithRetry(transport, req, retry, "chat completion");
  try {
    return resp.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kMalformedResponse,
                "chat completion lacks choices[0].message.content");
  }
}

// ---------------------------------------------------------------- lexicon

std::span<const std::string_view> LexiconHateTerms() { return kHateTerms; }
std::span<const std::string_view> LexiconPositiveTerms() { return kPositiveTerms; }

double BuiltinLexiconScore(std::string_view text, const TargetIdentity& identity,
                           const std::map<TargetIdentity, double>& offsets) {
  int hate = 0;
  int positive = 0;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    if (std::find(std::begin(kHateTerms), std::end(kHateTerms), word) !=
        std::end(kHateTerms)) {
      ++hate;
    }
    if (std::find(std::begin(kPositiveTerms), std::end(kPositiveTerms), word) !=
        std::end(kPositiveTerms)) {
      ++positive;
    }
    word.clear();
  };
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u)) {
      word.push_back(static_cast<char>(std::tolower(u)));
    } else {
      flush();
    }
  }
  flush();

  double score = 0.10;
  if (hate >= 1) score += 0.40;
  if (hate >= 2) score += 0.10 * std::min(hate - 1, 3);
  if (positive >= 1) score -= 0.25;
  if (auto it = offsets.find(identity); it != offsets.end()) score += it->second;
  return std::clamp(score, 0.0, 1.0);
}

}  // namespace hsaudit
