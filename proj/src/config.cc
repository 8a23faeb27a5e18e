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


#include "hsaudit/config.h"

#include <cstdlib>
#include <ctime>
#include <initializer_list>
#include <set>

#include "toml.hpp"

#include "hsaudit/error.h"
#include "hsaudit/util.h"

namespace hsaudit {
namespace {

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kConfigInvalid, message);
}

void CheckKeys(const toml::table& table, const std::string& where,
               std::initializer_list<std::string_view> allowed) {
  for (auto&& [key, value] : table) {
    const std::string_view k = key.str();
    if (k == "api_key" || k == "key" || k == "token" || k == "secret") {
      Invalid(where + "." + std::string(k) +
              ": credentials are read from the environment, not the config");
    }
    bool known = false;
    for (auto a : allowed) known = known || a == k;
    if (!known) Invalid("unknown key '" + std::string(k) + "' in " + where);
  }
}

const toml::table* SubTable(const toml::table& parent, std::string_view key,
                            const std::string& where) {
  const toml::node* node = parent.get(key);
  if (node == nullptr) return nullptr;
  if (!node->is_table()) Invalid(where + "." + std::string(key) + " must be a table");
  return node->as_table();
}

std::optional<std::string> GetString(const toml::table& t, std::string_view key,
                                     const std::string& where) {
  const toml::node* node = t.get(key);
  if (node == nullptr) return std::nullopt;
  if (!node->is_string()) Invalid(where + "." + std::string(key) + " must be a string");
  return node->value<std::string>();
}

std::optional<std::int64_t> GetInt(const toml::table& t, std::string_view key,
                                   const std::string& where) {
  const toml::node* node = t.get(key);
  if (node == nullptr) return std::nullopt;
  if (!node->is_integer()) Invalid(where + "." + std::string(key) + " must be an integer");
  return node->value<std::int64_t>();
}

std::optional<double> GetDouble(const toml::table& t, std::string_view key,
                                const std::string& where) {
  const toml::node* node = t.get(key);
  if (node == nullptr) return std::nullopt;
  if (!node->is_number()) Invalid(where + "." + std::string(key) + " must be a number");
  return node->value<double>();
}

std::optional<bool> GetBool(const toml::table& t, std::string_view key,
                            const std::string& where) {
  const toml::node* node = t.get(key);
  if (node == nullptr) return std::nullopt;
  if (!node->is_boolean()) Invalid(where + "." + std::string(key) + " must be a boolean");
  return node->value<bool>();
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::string EpochToIso(std::string_view epoch) {
  const auto seconds = ParseDouble(epoch);
  if (!seconds || *seconds < 0) Invalid("SOURCE_DATE_EPOCH is not a timestamp");
  const auto t = static_cast<std::time_t>(*seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ClassifierConfig ParseClassifier(const toml::table& t, const std::string& where,
                                 const std::filesystem::path& base) {
  CheckKeys(t, where,
            {"model_id", "backend", "attribute", "threshold", "endpoint", "api_key_env",
             "rate_limit", "parallelism", "batch_size", "cache_path", "offsets",
             "snapshot_date"});
  ClassifierConfig c;
  c.model_id = GetString(t, "model_id", where).value_or("");
  if (c.model_id.empty()) Invalid(where + ".model_id is required");
  const std::string backend = GetString(t, "backend", where).value_or("builtin_lexicon");
  auto b = ParseBackend(backend);
  if (!b) Invalid(where + ".backend: unknown backend '" + backend + "'");
  c.backend = *b;
  c.attribute = GetString(t, "attribute", where);
  c.threshold = GetDouble(t, "threshold", where).value_or(c.threshold);
  c.endpoint = GetString(t, "endpoint", where).value_or("");
  c.api_key_env = GetString(t, "api_key_env", where).value_or(c.api_key_env);
  c.rate_limit = GetDouble(t, "rate_limit", where).value_or(c.rate_limit);
  c.parallelism = static_cast<int>(GetInt(t, "parallelism", where).value_or(c.parallelism));
  const auto batch = GetInt(t, "batch_size", where).value_or(32);
  if (batch < 1) Invalid(where + ".batch_size must be positive");
  c.batch_size = static_cast<std::size_t>(batch);
  if (auto p = GetString(t, "cache_path", where)) c.cache_path = Resolve(base, *p);
  c.snapshot_date = GetString(t, "snapshot_date", where).value_or("");
  if (const toml::table* offsets = SubTable(t, "offsets", where)) {
    for (auto&& [key, value] : *offsets) {
      auto identity = ParseIdentityKey(key.str());
      if (!identity) {
        Invalid(where + ".offsets: unknown identity '" + std::string(key.str()) + "'");
      }
      if (!value.is_number()) Invalid(where + ".offsets values must be numbers");
      c.offsets[*identity] = *value.value<double>();
    }
  }
  try {
    c.Validate();
  } catch (const Error& e) {
    Invalid(where + ": " + e.detail());
  }
  return c;
}

}  // namespace

std::optional<AnnotationMode> ParseAnnotationMode(std::string_view name) {
  if (name == "emit_prompts") return AnnotationMode::kEmitPrompts;
  if (name == "ingest_responses") return AnnotationMode::kIngestResponses;
  if (name == "call_service") return AnnotationMode::kCallService;
  return std::nullopt;
}

std::string_view AnnotationModeName(AnnotationMode mode) {
  switch (mode) {
    case AnnotationMode::kEmitPrompts: return "emit_prompts";
    case AnnotationMode::kIngestResponses: return "ingest_responses";
    case AnnotationMode::kCallService: return "call_service";
  }
  return "";
}

const CorpusSpec& RunConfig::FindCorpus(std::string_view name) const {
  for (const auto& c : corpora) {
    if (c.name == name) return c;
  }
  Invalid("no corpus named '" + std::string(name) + "'");
}

void RunConfig::Validate() const {
  if (corpora.empty()) Invalid("at least one [[corpus]] is required");
  if (classifiers.empty()) Invalid("at least one [[classifier]] is required");
  std::set<std::string> names;
  for (const auto& c : corpora) {
    if (!names.insert(c.name).second) Invalid("duplicate corpus name '" + c.name + "'");
    if (!std::filesystem::exists(c.path)) {
      Invalid("corpus '" + c.name + "': " + c.path.string() + " does not exist");
    }
  }
  (void)FindCorpus(bias_corpus);
  (void)FindCorpus(eval_corpus);
  std::set<std::string> models;
  for (const auto& c : classifiers) {
    if (!models.insert(c.model_id).second) {
      Invalid("duplicate classifier model_id '" + c.model_id + "'");
    }
    c.Validate();
    if (c.backend == Backend::kCacheFile && !std::filesystem::exists(c.cache_path)) {
      Invalid("classifier '" + c.model_id + "': " + c.cache_path.string() +
              " does not exist");
    }
  }
  if (annotation.mode == AnnotationMode::kIngestResponses) {
    for (const auto& p : {annotation.emotion_replies, annotation.stereotype_replies}) {
      if (p.empty() || !std::filesystem::exists(p)) {
        Invalid("annotation replies file '" + p.string() + "' does not exist");
      }
    }
  }
  if (annotation.mode == AnnotationMode::kCallService && annotation.endpoint.empty()) {
    Invalid("annotation.mode = call_service needs annotation.endpoint");
  }
  if (annotation.parallelism < 1 || !(annotation.rate_limit > 0)) {
    Invalid("annotation parallelism and rate_limit must be positive");
  }
  if (!nli.seed_cache.empty() && !std::filesystem::exists(nli.seed_cache)) {
    Invalid("nli.seed_cache " + nli.seed_cache.string() + " does not exist");
  }
  if (nli.parallelism < 1 || !(nli.rate_limit > 0)) {
    Invalid("nli parallelism and rate_limit must be positive");
  }
  if (analysis.clusters < 1) Invalid("analysis.clusters must be positive");
  if (analysis.reliability_bins < 2) Invalid("analysis.reliability_bins must be >= 2");
  if (analysis.top_stereotypes < 1) Invalid("analysis.top_stereotypes must be positive");
}

RunConfig ParseRunConfig(std::string_view text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    Invalid(std::string("TOML syntax: ") + std::string(e.description()) + " at line " +
            std::to_string(e.source().begin.line));
  }
  CheckKeys(root, "config",
            {"run", "corpus", "bias", "eval", "classifier", "annotation", "nli", "analysis"});

  RunConfig cfg;
  cfg.config_sha256 = Sha256Hex(text);
  cfg.out = base_dir / "out";

  if (const toml::table* run = SubTable(root, "run", "config")) {
    CheckKeys(*run, "run", {"seed", "out", "created_at"});
    const auto seed = GetInt(*run, "seed", "run").value_or(42);
    if (seed < 0) Invalid("run.seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    if (auto out = GetString(*run, "out", "run")) cfg.out = Resolve(base_dir, *out);
    cfg.created_at = GetString(*run, "created_at", "run").value_or("");
  }
  if (cfg.created_at.empty()) {
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
      cfg.created_at = EpochToIso(epoch);
    }
  }

  const toml::node* corpora = root.get("corpus");
  if (corpora == nullptr || !corpora->is_array_of_tables()) {
    Invalid("config needs one or more [[corpus]] tables");
  }
  for (const toml::node& node : *corpora->as_array()) {
    const toml::table& t = *node.as_table();
    const std::string where = "corpus[" + std::to_string(cfg.corpora.size()) + "]";
    CheckKeys(t, where, {"name", "path", "format"});
    CorpusSpec spec;
    spec.name = GetString(t, "name", where).value_or("");
    const auto path = GetString(t, "path", where);
    const auto format = GetString(t, "format", where).value_or("generic_csv");
    if (spec.name.empty() || !path) Invalid(where + " needs name and path");
    if (spec.name.find_first_of("/\\") != std::string::npos || spec.name == "." ||
        spec.name == "..") {
      Invalid(where + ".name must be a plain token");
    }
    spec.path = Resolve(base_dir, *path);
    auto f = ParseCorpusFormat(format);
    if (!f) Invalid(where + ".format: unknown format '" + format + "'");
    spec.format = *f;
    cfg.corpora.push_back(std::move(spec));
  }
  cfg.bias_corpus = cfg.corpora.front().name;
  cfg.eval_corpus = cfg.corpora.front().name;
  if (const toml::table* bias = SubTable(root, "bias", "config")) {
    CheckKeys(*bias, "bias", {"corpus"});
    cfg.bias_corpus = GetString(*bias, "corpus", "bias").value_or(cfg.bias_corpus);
  }
  if (const toml::table* eval = SubTable(root, "eval", "config")) {
    CheckKeys(*eval, "eval", {"corpus"});
    cfg.eval_corpus = GetString(*eval, "corpus", "eval").value_or(cfg.eval_corpus);
  }

  const toml::node* classifiers = root.get("classifier");
  if (classifiers == nullptr || !classifiers->is_array_of_tables()) {
    Invalid("config needs one or more [[classifier]] tables");
  }
  for (const toml::node& node : *classifiers->as_array()) {
    cfg.classifiers.push_back(ParseClassifier(
        *node.as_table(), "classifier[" + std::to_string(cfg.classifiers.size()) + "]",
        base_dir));
  }

  if (const toml::table* a = SubTable(root, "annotation", "config")) {
    CheckKeys(*a, "annotation",
              {"mode", "emotion_replies", "stereotype_replies", "endpoint", "model",
               "api_key_env", "parallelism", "rate_limit"});
    const std::string mode = GetString(*a, "mode", "annotation").value_or("emit_prompts");
    auto m = ParseAnnotationMode(mode);
    if (!m) Invalid("annotation.mode: unknown mode '" + mode + "'");
    auto& ann = cfg.annotation;
    ann.mode = *m;
    if (auto p = GetString(*a, "emotion_replies", "annotation")) {
      ann.emotion_replies = Resolve(base_dir, *p);
    }
    if (auto p = GetString(*a, "stereotype_replies", "annotation")) {
      ann.stereotype_replies = Resolve(base_dir, *p);
    }
    ann.endpoint = GetString(*a, "endpoint", "annotation").value_or("");
    ann.model = GetString(*a, "model", "annotation").value_or(ann.model);
    ann.api_key_env = GetString(*a, "api_key_env", "annotation").value_or(ann.api_key_env);
    ann.parallelism =
        static_cast<int>(GetInt(*a, "parallelism", "annotation").value_or(ann.parallelism));
    ann.rate_limit = GetDouble(*a, "rate_limit", "annotation").value_or(ann.rate_limit);
  }

  if (const toml::table* n = SubTable(root, "nli", "config")) {
    CheckKeys(*n, "nli", {"endpoint", "seed_cache", "parallelism", "rate_limit"});
    cfg.nli.endpoint = GetString(*n, "endpoint", "nli").value_or("");
    if (auto p = GetString(*n, "seed_cache", "nli")) cfg.nli.seed_cache = Resolve(base_dir, *p);
    cfg.nli.parallelism =
        static_cast<int>(GetInt(*n, "parallelism", "nli").value_or(cfg.nli.parallelism));
    cfg.nli.rate_limit = GetDouble(*n, "rate_limit", "nli").value_or(cfg.nli.rate_limit);
  }

  if (const toml::table* a = SubTable(root, "analysis", "config")) {
    CheckKeys(*a, "analysis",
              {"bias", "debias", "annotate", "scm", "cluster", "calibrate", "metrics",
               "clusters", "reliability_bins", "top_stereotypes", "min_emotion_count"});
    auto& an = cfg.analysis;
    an.bias = GetBool(*a, "bias", "analysis").value_or(an.bias);
    an.debias = GetBool(*a, "debias", "analysis").value_or(an.debias);
    an.annotate = GetBool(*a, "annotate", "analysis").value_or(an.annotate);
    an.scm = GetBool(*a, "scm", "analysis").value_or(an.scm);
    an.cluster = GetBool(*a, "cluster", "analysis").value_or(an.cluster);
    an.calibrate = GetBool(*a, "calibrate", "analysis").value_or(an.calibrate);
    an.metrics = GetBool(*a, "metrics", "analysis").value_or(an.metrics);
    an.clusters = static_cast<int>(GetInt(*a, "clusters", "analysis").value_or(an.clusters));
    an.reliability_bins = static_cast<int>(
        GetInt(*a, "reliability_bins", "analysis").value_or(an.reliability_bins));
    const auto top = GetInt(*a, "top_stereotypes", "analysis").value_or(10);
    const auto min_count = GetInt(*a, "min_emotion_count", "analysis").value_or(10);
    if (top < 1 || min_count < 0) Invalid("analysis counts must be non-negative");
    an.top_stereotypes = static_cast<std::size_t>(top);
    an.min_emotion_count = static_cast<std::size_t>(min_count);
  }
  return cfg;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    Invalid("config file " + path.string() + " does not exist");
  }
  const std::string text = ReadFile(path);
  const auto base = std::filesystem::absolute(path).parent_path();
  RunConfig cfg = ParseRunConfig(text, base);
  cfg.config_path = path;
  cfg.Validate();
  return cfg;
}

}  // namespace hsaudit
