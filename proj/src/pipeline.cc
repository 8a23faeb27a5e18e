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


#include "hsaudit/pipeline.h"

#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <unordered_map>

#include "json.hpp"

#include "hsaudit/analysis.h"
#include "hsaudit/bias.h"
#include "hsaudit/corpus.h"
#include "hsaudit/emotion.h"
#include "hsaudit/scm.h"
#include "hsaudit/util.h"

namespace hsaudit {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr std::pair<Stage, std::string_view> kStageNames[] = {
    {Stage::kIngest, "ingest"},   {Stage::kScore, "score"},
    {Stage::kBias, "bias"},       {Stage::kDebias, "debias"},
    {Stage::kAnnotate, "annotate"}, {Stage::kScm, "scm"},
    {Stage::kCluster, "cluster"}, {Stage::kCalibrate, "calibrate"},
    {Stage::kMetrics, "metrics"}, {Stage::kReport, "report"},
    {Stage::kAll, "all"},
};

// Chat replies keyed by (case_id, prompt hash); the JSONL file is
// append-only like the score and NLI caches.
class ReplyCache {
 public:
  explicit ReplyCache(fs::path path) : path_(std::move(path)) {
    if (!fs::exists(path_)) return;
    const auto lines = SplitLines(ReadFile(path_));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (Trim(lines[i]).empty()) continue;
      const auto j = nlohmann::json::parse(lines[i], nullptr, false);
      if (!j.is_object() || !j.contains("case_id") || !j.contains("prompt_sha256") ||
          !j.contains("response") || !j["response"].is_string()) {
        throw Error(ErrorCode::kIncompleteCache,
                    path_.string() + " line " + std::to_string(i + 1) +
                        " is not a valid reply record");
      }
      entries_.emplace(j["case_id"].get<std::string>() + "\n" +
                           j["prompt_sha256"].get<std::string>(),
                       j["response"].get<std::string>());
    }
  }

  std::optional<std::string> Lookup(const std::string& case_id, const std::string& hash) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(case_id + "\n" + hash);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void Insert(const std::string& case_id, const std::string& hash,
              const std::string& response) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!entries_.emplace(case_id + "\n" + hash, response).second) return;
    ordered_json j;
    j["case_id"] = case_id;
    j["prompt_sha256"] = hash;
    j["response"] = response;
    fs::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    out << j.dump() << "\n";
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot append to " + path_.string());
  }

 private:
  fs::path path_;
  std::mutex mu_;
  std::unordered_map<std::string, std::string> entries_;
};

struct ParseSummary {
  std::size_t requested = 0;
  std::size_t answered = 0;
  std::size_t failures = 0;
  ordered_json ToJson() const {
    ordered_json j;
    j["requested"] = requested;
    j["answered"] = answered;
    j["missing"] = requested - answered;
    j["parse_failures"] = failures;
    j["failure_rate"] = answered == 0 ? 0.0
                                      : static_cast<double>(failures) /
                                            static_cast<double>(answered);
    return j;
  }
};

class Pipeline {
 public:
  Pipeline(const RunConfig& config, const RunOptions& options)
      : config_(config), options_(options) {
    if (options.out) config_.out = *options.out;
    if (options.seed) config_.seed = *options.seed;
    if (options.transport != nullptr) {
      transport_ = options.transport;
    } else if (options.offline) {
      owned_transport_ = std::make_unique<OfflineTransport>();
      transport_ = owned_transport_.get();
    } else {
      owned_transport_ = std::make_unique<NetworkTransport>();
      transport_ = owned_transport_.get();
    }
  }

  void RunStage(Stage stage) {
    current_ = stage;
    Log("stage " + std::string(StageName(stage)));
    switch (stage) {
      case Stage::kIngest: Ingest(); break;
      case Stage::kScore: Score(); break;
      case Stage::kBias: Bias(); break;
      case Stage::kDebias: Debias(); break;
      case Stage::kAnnotate: Annotate(); break;
      case Stage::kScm: Scm(); break;
      case Stage::kCluster: Cluster(); break;
      case Stage::kCalibrate: Calibrate(); break;
      case Stage::kMetrics: Metrics(); break;
      case Stage::kReport: Report(); break;
      case Stage::kAll: {
        const auto& a = config_.analysis;
        const std::pair<Stage, bool> chain[] = {
            {Stage::kIngest, true},        {Stage::kScore, true},
            {Stage::kBias, a.bias},        {Stage::kDebias, a.bias && a.debias},
            {Stage::kAnnotate, a.annotate}, {Stage::kScm, a.scm},
            {Stage::kCluster, a.scm && a.cluster}, {Stage::kCalibrate, a.calibrate},
            {Stage::kMetrics, a.metrics},  {Stage::kReport, true},
        };
        for (const auto& [s, enabled] : chain) {
          if (enabled) RunStage(s);
        }
        break;
      }
    }
  }

  Stage current() const { return current_; }
  std::optional<ReportBundle>& bundle() { return bundle_; }

 private:
  // ------------------------------------------------------------ paths

  fs::path StageDir(std::string_view stage) const {
    return config_.out / "stages" / std::string(stage);
  }
  fs::path CacheDir(const std::string& corpus) const {
    return config_.out / "cache" / corpus;
  }
  fs::path ScoresPath(const std::string& model, const std::string& corpus) const {
    return StageDir("score") / FileSlug(model) / (corpus + ".jsonl");
  }
  fs::path DebiasedPath(const std::string& model, const std::string& corpus) const {
    return StageDir("debias") / FileSlug(model) / (corpus + ".jsonl");
  }
  fs::path ProfilePath(const std::string& model) const {
    return StageDir("bias") / (FileSlug(model) + ".json");
  }

  [[noreturn]] void Missing(std::string_view needs, const fs::path& path) const {
    throw Error(ErrorCode::kStageDependencyMissing,
                "stage '" + std::string(StageName(current_)) + "' needs '" +
                    std::string(needs) + "' to have run (missing " + path.string() + ")");
  }

  void Log(const std::string& line) const {
    if (options_.log != nullptr) *options_.log << "[hsaudit] " << line << "\n";
  }

  // ------------------------------------------------------------ loaders

  const Corpus& Ingested(const std::string& name) {
    if (auto it = corpora_.find(name); it != corpora_.end()) return it->second;
    const fs::path path = StageDir("ingest") / (name + ".csv");
    if (!fs::exists(path)) Missing("ingest", path);
    return corpora_.emplace(name, LoadCorpus(path, CorpusFormat::kGenericCsv, name))
        .first->second;
  }

  std::vector<ScoreRecord> Scores(const std::string& model, const std::string& corpus) {
    const fs::path path = ScoresPath(model, corpus);
    if (!fs::exists(path)) Missing("score", path);
    return ScoreRecordsFromJsonl(ReadFile(path));
  }

  BiasProfile Profile(const std::string& model) {
    const fs::path path = ProfilePath(model);
    if (!fs::exists(path)) Missing("bias", path);
    return BiasProfileFromJson(ReadFile(path));
  }

  std::vector<ScmScore> ScmScores() {
    const fs::path path = StageDir("scm") / "scm_scores.csv";
    if (!fs::exists(path)) Missing("scm", path);
    return ScmScoresFromCsv(ReadFile(path));
  }

  std::vector<TestCase> TargetedCases(const Corpus& corpus, bool named_only) const {
    std::vector<TestCase> out;
    for (const auto& c : corpus.cases()) {
      if (named_only ? c.identity.is_named() : !c.identity.is_none()) out.push_back(c);
    }
    return out;
  }

  // ------------------------------------------------------------ stages

  void Ingest() {
    for (const auto& spec : config_.corpora) {
      const Corpus corpus = LoadCorpus(spec.path, spec.format, spec.name);
      WriteFile(StageDir("ingest") / (spec.name + ".csv"), SerializeGenericCsv(corpus));
      ordered_json stats;
      stats["corpus"] = spec.name;
      stats["format"] = CorpusFormatName(spec.format);
      stats["cases"] = corpus.size();
      stats["identities"] = ordered_json::object();
      for (const auto& [key, count] : ComputeCorpusStats(corpus)) {
        stats["identities"][key.first.Key()][std::string(GoldLabelName(key.second))] = count;
      }
      try {
        const auto groups = BuildMinimalSets(corpus);
        stats["minimal_sets"] = {{"templates", groups.size()},
                                 {"cases", groups.size() * kNamedIdentities.size()}};
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoTemplates) throw;
        stats["minimal_sets"] = nullptr;
      }
      WriteFile(StageDir("ingest") / (spec.name + ".stats.json"), stats.dump(2) + "\n");
      corpora_.insert_or_assign(spec.name, corpus);
      Log("ingested " + spec.name + ": " + std::to_string(corpus.size()) + " cases");
    }
  }

  void Score() {
    for (const auto& classifier : config_.classifiers) {
      for (const auto& spec : config_.corpora) {
        const Corpus& corpus = Ingested(spec.name);
        ScoreCache cache = ScoreCache::Open(CacheDir(spec.name) / "scores.jsonl");
        const auto records =
            ScoreCases(classifier, corpus.cases(), cache, *transport_, options_.retry);
        WriteFile(ScoresPath(classifier.model_id, spec.name), ScoreRecordsToJsonl(records));
        Log("scored " + spec.name + " with " + classifier.model_id);
      }
    }
  }

  void Bias() {
    const Corpus& corpus = Ingested(config_.bias_corpus);
    const auto groups = BuildMinimalSets(corpus);
    for (const auto& classifier : config_.classifiers) {
      const auto scores = Scores(classifier.model_id, config_.bias_corpus);
      const auto normalized = NormalizeByTemplate(groups, scores);
      const auto profile =
          IdentityBiasProfile(normalized, classifier.model_id, config_.bias_corpus);
      WriteFile(ProfilePath(classifier.model_id), BiasProfileToJson(profile));
    }
    Log("bias profiles over " + std::to_string(groups.size()) + " templates");
  }

  void Debias() {
    const Corpus& corpus = Ingested(config_.eval_corpus);
    for (const auto& classifier : config_.classifiers) {
      const BiasProfile profile = Profile(classifier.model_id);
      auto scores = Scores(classifier.model_id, config_.eval_corpus);
      for (auto& r : scores) {
        const TestCase& c = corpus.Get(r.case_id);
        if (!c.identity.is_named()) continue;  // no bias estimate for these
        r = ApplyDebias(r, profile, c.identity, classifier.threshold).record;
      }
      WriteFile(DebiasedPath(classifier.model_id, config_.eval_corpus),
                ScoreRecordsToJsonl(scores));
    }
  }

  std::vector<LlmReply> CallService(const std::vector<std::pair<std::string, ChatPrompt>>& prompts,
                                    const std::string& task) {
    const auto& ann = config_.annotation;
    ReplyCache cache(CacheDir(config_.eval_corpus) / ("replies_" + task + ".jsonl"));
    std::string api_key;
    if (const char* key = std::getenv(ann.api_key_env.c_str())) api_key = key;
    std::vector<std::string> hashes;
    std::vector<std::size_t> misses;
    for (std::size_t i = 0; i < prompts.size(); ++i) {
      hashes.push_back(Sha256Hex(prompts[i].second.system + "\n" + prompts[i].second.user));
      if (!cache.Lookup(prompts[i].first, hashes[i])) misses.push_back(i);
    }
    auto failure = RunFanOut(misses.size(), ann.parallelism, ann.rate_limit, [&](std::size_t k) {
      const auto& [case_id, prompt] = prompts[misses[k]];
      cache.Insert(case_id, hashes[misses[k]],
                   CompleteChat(*transport_, ann.endpoint, ann.model, prompt.system,
                                prompt.user, api_key, options_.retry));
    });
    if (failure) std::rethrow_exception(failure->error);
    std::vector<LlmReply> replies;
    for (std::size_t i = 0; i < prompts.size(); ++i) {
      replies.push_back({prompts[i].first, *cache.Lookup(prompts[i].first, hashes[i])});
    }
    return replies;
  }

  void Annotate() {
    const Corpus& corpus = Ingested(config_.eval_corpus);
    const auto cases = TargetedCases(corpus, /*named_only=*/false);
    std::vector<std::pair<std::string, ChatPrompt>> emotion_prompts, stereotype_prompts;
    for (const auto& c : cases) {
      emotion_prompts.emplace_back(c.case_id, BuildEmotionPrompt(c));
      stereotype_prompts.emplace_back(c.case_id, BuildStereotypePrompt(c));
    }
    const fs::path dir = StageDir("annotate");
    WriteFile(dir / "prompts_emotion.jsonl", PromptBatchToJsonl(emotion_prompts));
    WriteFile(dir / "prompts_stereotype.jsonl", PromptBatchToJsonl(stereotype_prompts));

    ordered_json summary;
    summary["mode"] = AnnotationModeName(config_.annotation.mode);
    summary["prompts"] = cases.size();
    if (config_.annotation.mode == AnnotationMode::kEmitPrompts) {
      WriteFile(dir / "summary.json", summary.dump(2) + "\n");
      Log("annotation prompts written; no replies requested");
      return;
    }

    std::vector<LlmReply> emotion_replies, stereotype_replies;
    if (config_.annotation.mode == AnnotationMode::kIngestResponses) {
      emotion_replies = RepliesFromJsonl(ReadFile(config_.annotation.emotion_replies));
      stereotype_replies = RepliesFromJsonl(ReadFile(config_.annotation.stereotype_replies));
    } else {
      emotion_replies = CallService(emotion_prompts, "emotion");
      stereotype_replies = CallService(stereotype_prompts, "stereotype");
    }

    auto index = [&](const std::vector<LlmReply>& replies) {
      std::unordered_map<std::string, const LlmReply*> out;
      for (const auto& r : replies) {
        (void)corpus.Get(r.case_id);
        out.emplace(r.case_id, &r);
      }
      return out;
    };
    const auto emotion_by_case = index(emotion_replies);
    const auto stereotype_by_case = index(stereotype_replies);

    std::vector<EmotionAnnotation> annotations;
    std::vector<LlmReply> failures;
    std::vector<StereotypeSpan> spans;
    ParseSummary emotion_summary, stereotype_summary;
    for (const auto& c : cases) {
      ++emotion_summary.requested;
      ++stereotype_summary.requested;
      if (auto it = emotion_by_case.find(c.case_id); it != emotion_by_case.end()) {
        ++emotion_summary.answered;
        try {
          annotations.push_back(
              {c.case_id, ParseEmotionResponse(it->second->response), it->second->response});
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kParseFailure) throw;
          ++emotion_summary.failures;
          failures.push_back(*it->second);
        }
      }
      if (auto it = stereotype_by_case.find(c.case_id); it != stereotype_by_case.end()) {
        ++stereotype_summary.answered;
        spans.push_back(ParseStereotypeResponse(c.case_id, it->second->response));
      }
    }
    WriteFile(dir / "annotations.jsonl", AnnotationsToJsonl(annotations));
    WriteFile(dir / "parse_failures.jsonl", RepliesToJsonl(failures));
    WriteFile(dir / "spans.jsonl", SpansToJsonl(spans));
    summary["emotion"] = emotion_summary.ToJson();
    summary["stereotype"] = stereotype_summary.ToJson();
    WriteFile(dir / "summary.json", summary.dump(2) + "\n");
    Log("annotations: " + std::to_string(annotations.size()) + " parsed, " +
        std::to_string(failures.size()) + " parse failures");
  }

  void Scm() {
    const Corpus& corpus = Ingested(config_.eval_corpus);
    std::vector<NliRequest> requests;
    for (const auto& c : TargetedCases(corpus, /*named_only=*/true)) {
      for (const auto& [kind, hypothesis] : BuildHypotheses(c.identity)) {
        requests.push_back({c.case_id, kind, c.text, hypothesis});
      }
    }
    NliCache cache = NliCache::Open(CacheDir(config_.eval_corpus) / "nli.jsonl");
    if (!config_.nli.seed_cache.empty()) cache.Import(config_.nli.seed_cache);
    NliFetchOptions fetch;
    fetch.endpoint = config_.nli.endpoint;
    fetch.parallelism = config_.nli.parallelism;
    fetch.rate_limit = config_.nli.rate_limit;
    fetch.retry = options_.retry;
    const auto records = FetchNliLogits(requests, cache, *transport_, fetch);
    const auto scores = ScmScoresFromRecords(records);
    WriteFile(StageDir("scm") / "scm_scores.csv", ScmScoresToCsv(scores));
    Log("scm scores for " + std::to_string(scores.size()) + " cases");
  }

  ordered_json CorrelationJson(const ClusterCorrelation& corr) const {
    ordered_json j;
    j["pearson_r"] = corr.pearson ? ordered_json(*corr.pearson) : ordered_json(nullptr);
    j["spearman_rho"] = corr.spearman ? ordered_json(*corr.spearman) : ordered_json(nullptr);
    j["degenerate"] = corr.degenerate;
    j["clusters"] = ordered_json::array();
    for (const auto& c : corr.table) {
      j["clusters"].push_back({{"cluster", c.id},
                               {"warmth", c.centroid.x},
                               {"competence", c.centroid.y},
                               {"distance", c.distance},
                               {"size", c.members.size()},
                               {"accuracy", *c.accuracy}});
    }
    return j;
  }

  void Cluster() {
    const Corpus& corpus = Ingested(config_.eval_corpus);
    const auto scores = ScmScores();
    KMeansResult raw;
    const auto clusters = ClusterScmScores(scores, config_.analysis.clusters, config_.seed, &raw);
    const fs::path dir = StageDir("cluster");
    WriteFile(dir / "clusters.csv", ClustersToCsv(clusters, scores));
    ordered_json km;
    km["k"] = config_.analysis.clusters;
    km["seed"] = config_.seed;
    km["inertia"] = raw.inertia;
    km["iterations"] = raw.iterations;
    km["best_restart"] = raw.best_restart;
    km["inertia_history"] = raw.inertia_history;
    WriteFile(dir / "kmeans.json", km.dump(2) + "\n");
    for (const auto& classifier : config_.classifiers) {
      auto filled = clusters;
      FillClusterAccuracy(filled, Scores(classifier.model_id, config_.eval_corpus), corpus);
      WriteFile(dir / ("correlation_" + FileSlug(classifier.model_id) + ".json"),
                CorrelationJson(ClusterAccuracyCorrelation(filled)).dump(2) + "\n");
    }
  }

  void Calibrate() {
    const Corpus& corpus = Ingested(config_.eval_corpus);
    const fs::path dir = StageDir("calibrate");
    for (const auto& classifier : config_.classifiers) {
      const auto scores = Scores(classifier.model_id, config_.eval_corpus);
      const auto table = ReliabilityBins(scores, corpus, config_.analysis.reliability_bins);
      const std::string slug = FileSlug(classifier.model_id);
      WriteFile(dir / ("reliability_" + slug + ".csv"), ReliabilityToCsv(table));
      WriteFile(dir / ("ece_" + slug + ".json"),
                "{\"model_id\": " + ordered_json(classifier.model_id).dump() +
                    ", \"ece\": " + FormatShortest(table.ece) + "}\n");
    }
  }

  static ordered_json PrfJson(const PrfTable& prf) {
    auto row = [](const PrfRow& r) {
      ordered_json j;
      j["name"] = r.name;
      j["precision"] = r.precision;
      j["recall"] = r.recall;
      j["f1"] = r.f1;
      j["accuracy"] = r.accuracy;
      j["tp"] = r.tp;
      j["fp"] = r.fp;
      j["fn"] = r.fn;
      j["tn"] = r.tn;
      j["precision_degenerate"] = r.precision_degenerate;
      j["recall_degenerate"] = r.recall_degenerate;
      return j;
    };
    ordered_json j = ordered_json::array();
    for (const auto& r : prf.rows) j.push_back(row(r));
    j.push_back(row(prf.macro));
    return j;
  }

  std::optional<std::vector<EmotionAnnotation>> Annotations() const {
    const fs::path path = StageDir("annotate") / "annotations.jsonl";
    if (!fs::exists(path)) return std::nullopt;
    return AnnotationsFromJsonl(ReadFile(path));
  }

  void Metrics() {
    const Corpus& corpus = Ingested(config_.eval_corpus);
    const auto annotations = Annotations();
    ordered_json metrics;
    metrics["corpus"] = config_.eval_corpus;
    metrics["models"] = ordered_json::array();
    for (const auto& classifier : config_.classifiers) {
      const auto scores = Scores(classifier.model_id, config_.eval_corpus);
      ordered_json m;
      m["model_id"] = classifier.model_id;
      m["prf"] = PrfJson(PrfPerIdentity(scores, corpus));
      const fs::path debiased = DebiasedPath(classifier.model_id, config_.eval_corpus);
      if (fs::exists(debiased)) {
        m["prf_debiased"] = PrfJson(PrfPerIdentity(ScoreRecordsFromJsonl(ReadFile(debiased)), corpus));
      }
      if (annotations) {
        ordered_json by_emotion = ordered_json::object();
        for (const auto& [e, cell] : AccuracyByEmotion(*annotations, scores, corpus,
                                                       config_.analysis.min_emotion_count)) {
          by_emotion[std::string(EmotionName(e))] = {{"n", cell.n}, {"correct", cell.correct}};
        }
        m["accuracy_by_emotion"] = by_emotion;
        ordered_json by_polarity = ordered_json::array();
        for (const auto& [key, cell] : AccuracyByPolarityAndLabel(*annotations, scores, corpus)) {
          by_polarity.push_back({{"gold", GoldLabelName(key.first)},
                                 {"polarity", static_cast<int>(key.second)},
                                 {"n", cell.n},
                                 {"correct", cell.correct}});
        }
        m["accuracy_by_polarity"] = by_polarity;
      }
      metrics["models"].push_back(std::move(m));
    }
    WriteFile(StageDir("metrics") / "metrics.json", metrics.dump(2) + "\n");
  }

  void Report() {
    ReportBundle b;
    const auto& cfg = config_;
    b.metadata.emplace_back("tool", "hsaudit");
    b.metadata.emplace_back("config_sha256", cfg.config_sha256);
    b.metadata.emplace_back("created_at", cfg.created_at.empty() ? "unset" : cfg.created_at);
    b.metadata.emplace_back("seed", std::to_string(cfg.seed));
    std::string corpora, models;
    for (const auto& c : cfg.corpora) {
      corpora += (corpora.empty() ? "" : ",") + c.name + ":" +
                 std::string(CorpusFormatName(c.format));
    }
    for (const auto& c : cfg.classifiers) {
      models += (models.empty() ? "" : ",") + c.model_id + ":" +
                std::string(BackendName(c.backend));
      if (c.attribute) models += ":" + *c.attribute;
      if (!c.snapshot_date.empty()) models += "@" + c.snapshot_date;
    }
    b.metadata.emplace_back("corpora", corpora);
    b.metadata.emplace_back("models", models);
    b.metadata.emplace_back("bias_corpus", cfg.bias_corpus);
    b.metadata.emplace_back("eval_corpus", cfg.eval_corpus);
    b.metadata.emplace_back("annotation_mode",
                            std::string(AnnotationModeName(cfg.annotation.mode)));
    b.metadata.emplace_back("kmeans_k", std::to_string(cfg.analysis.clusters));
    b.metadata.emplace_back("kmeans_seed", std::to_string(cfg.seed));
    b.metadata.emplace_back("reliability_bins", std::to_string(cfg.analysis.reliability_bins));

    for (const auto& spec : cfg.corpora) {
      const Corpus& corpus = Ingested(spec.name);
      b.tables.push_back(CorpusStatsTable(spec.name, ComputeCorpusStats(corpus)));
    }
    const Corpus& eval = Ingested(cfg.eval_corpus);
    std::map<std::string, std::vector<ScoreRecord>> eval_scores;
    for (const auto& c : cfg.classifiers) {
      eval_scores[c.model_id] = Scores(c.model_id, cfg.eval_corpus);
    }

    // Minimal sets and bias.
    std::vector<BiasProfile> profiles;
    for (const auto& c : cfg.classifiers) {
      if (fs::exists(ProfilePath(c.model_id))) profiles.push_back(Profile(c.model_id));
    }
    if (!profiles.empty()) {
      const auto groups = BuildMinimalSets(Ingested(cfg.bias_corpus));
      Table t;
      t.name = "minimal_sets";
      t.producer_op = "build_minimal_sets";
      t.title = "Minimal sets (" + cfg.bias_corpus + ")";
      t.columns = {"Corpus", "Templates", "Cases"};
      t.rows.push_back({cfg.bias_corpus, std::to_string(groups.size()),
                        std::to_string(groups.size() * kNamedIdentities.size())});
      b.tables.push_back(std::move(t));
      b.tables.push_back(BiasTable(profiles));
      b.plots.push_back(BiasBarsData(profiles));
    }

    // Classification metrics, raw and debiased.
    for (const auto& c : cfg.classifiers) {
      const std::string slug = FileSlug(c.model_id);
      b.tables.push_back(PrfReportTable("prf_" + slug, c.model_id,
                                        PrfPerIdentity(eval_scores[c.model_id], eval)));
      const fs::path debiased = DebiasedPath(c.model_id, cfg.eval_corpus);
      if (fs::exists(debiased)) {
        b.tables.push_back(PrfReportTable(
            "prf_debiased_" + slug, c.model_id + ", debiased",
            PrfPerIdentity(ScoreRecordsFromJsonl(ReadFile(debiased)), eval)));
      }
    }

    // Emotions.
    if (const auto annotations = Annotations()) {
      b.plots.push_back(EmotionMatrixData(
          "emotion_by_identity", ComputeEmotionDistribution(*annotations, eval, GroupBy::kIdentity)));
      b.plots.push_back(EmotionMatrixData(
          "emotion_by_functionality",
          ComputeEmotionDistribution(*annotations, eval, GroupBy::kFunctionality)));
      b.plots.push_back(EmotionMatrixData(
          "emotion_by_gold", ComputeEmotionDistribution(*annotations, eval, GroupBy::kGold)));
      for (const auto& c : cfg.classifiers) {
        const auto& scores = eval_scores[c.model_id];
        b.tables.push_back(EmotionAccuracyTable(
            c.model_id, AccuracyByEmotion(*annotations, scores, eval,
                                          cfg.analysis.min_emotion_count)));
        b.tables.push_back(PolarityAccuracyTable(
            c.model_id, AccuracyByPolarityAndLabel(*annotations, scores, eval)));
      }
      const auto summary =
          nlohmann::json::parse(ReadFile(StageDir("annotate") / "summary.json"));
      Table t;
      t.name = "annotation_summary";
      t.producer_op = "parse_emotion_response";
      t.title = "Annotation replies";
      t.columns = {"Task", "Requested", "Answered", "Parse failures", "Failure rate"};
      for (const char* task : {"emotion", "stereotype"}) {
        const auto& s = summary.at(task);
        t.rows.push_back({task, std::to_string(s.at("requested").get<std::size_t>()),
                          std::to_string(s.at("answered").get<std::size_t>()),
                          std::to_string(s.at("parse_failures").get<std::size_t>()),
                          FormatFixed(s.at("failure_rate").get<double>(), 4)});
      }
      b.tables.push_back(std::move(t));
    }
    if (const fs::path spans = StageDir("annotate") / "spans.jsonl"; fs::exists(spans)) {
      b.tables.push_back(StereotypeTableReport(TopStereotypes(
          SpansFromJsonl(ReadFile(spans)), eval, cfg.analysis.top_stereotypes)));
    }

    // Stereotype content scores and clusters.
    if (const fs::path scm = StageDir("scm") / "scm_scores.csv"; fs::exists(scm)) {
      const auto scores = ScmScores();
      b.tables.push_back(ScmMeansTable(ScmIdentityMeans(scores, eval)));
      std::vector<Cluster2D> clusters;
      if (scores.size() >= static_cast<std::size_t>(cfg.analysis.clusters)) {
        clusters = ClusterScmScores(scores, cfg.analysis.clusters, cfg.seed);
      }
      b.plots.push_back(ScatterData(scores, eval, clusters));
      if (!clusters.empty()) {
        for (const auto& c : cfg.classifiers) {
          auto filled = clusters;
          FillClusterAccuracy(filled, eval_scores[c.model_id], eval);
          const auto corr = ClusterAccuracyCorrelation(filled);
          b.tables.push_back(ClusterCorrelationTable(c.model_id, corr));
          b.plots.push_back(DistanceAccuracyData(c.model_id, corr));
        }
      }
    }

    // Calibration.
    for (const auto& c : cfg.classifiers) {
      const auto& scores = eval_scores[c.model_id];
      const auto reliability = ReliabilityBins(scores, eval, cfg.analysis.reliability_bins);
      b.tables.push_back(CalibrationTable(c.model_id, reliability));
      b.plots.push_back(ReliabilityData(c.model_id, reliability));
      b.plots.push_back(HistogramData(
          c.model_id, ComputeScoreHistogram(scores, eval, cfg.analysis.reliability_bins)));
    }

    const fs::path dir = cfg.out / "report";
    std::error_code ec;
    fs::remove_all(dir, ec);
    if (ec) throw Error(ErrorCode::kIoFailure, "cannot clear " + dir.string());
    EmitBundle(b, dir);
    Log("report written to " + dir.string());
    bundle_ = std::move(b);
  }

  RunConfig config_;
  const RunOptions& options_;
  std::unique_ptr<HttpTransport> owned_transport_;
  HttpTransport* transport_ = nullptr;
  Stage current_ = Stage::kIngest;
  std::map<std::string, Corpus> corpora_;
  std::optional<ReportBundle> bundle_;
};

}  // namespace

std::optional<Stage> ParseStage(std::string_view name) {
  for (const auto& [stage, n] : kStageNames) {
    if (n == name) return stage;
  }
  return std::nullopt;
}

std::string_view StageName(Stage stage) {
  for (const auto& [s, n] : kStageNames) {
    if (s == stage) return n;
  }
  return "";
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigInvalid:
    case ErrorCode::kStageDependencyMissing:
    case ErrorCode::kInvalidArgument:
      return 2;
    case ErrorCode::kBackendUnavailable:
    case ErrorCode::kQuotaExceeded:
    case ErrorCode::kMalformedResponse:
    case ErrorCode::kIncompleteCache:
      return 3;
    default:
      return 4;
  }
}

RunResult RunPipeline(const RunConfig& config, const RunOptions& options) {
  RunResult result;
  Pipeline pipeline(config, options);
  auto fail = [&](std::optional<ErrorCode> code, std::string_view name,
                  const std::string& message, int exit_code) {
    result.exit_code = exit_code;
    result.error = code;
    result.failed_stage = std::string(StageName(pipeline.current()));
    ordered_json j;
    j["error"] = name;
    j["stage"] = result.failed_stage;
    j["message"] = message;
    j["exit_code"] = exit_code;
    result.error_json = j.dump();
  };
  try {
    pipeline.RunStage(options.stage);
    result.bundle = std::move(pipeline.bundle());
  } catch (const Error& e) {
    fail(e.code(), ErrorCodeName(e.code()), e.detail(), ExitCodeFor(e.code()));
  } catch (const std::exception& e) {
    fail(std::nullopt, "Internal", e.what(), 4);
  }
  return result;
}

}  // namespace hsaudit
