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


#include <cstdlib>
#include <map>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

#include "hsaudit/config.h"
#include "hsaudit/pipeline.h"
#include "hsaudit/synthetic.h"
#include "hsaudit/util.h"
#include "test_util.h"

namespace hsaudit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::map<std::string, std::string> ReadTree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), root).string()] = ReadFile(entry.path());
    }
  }
  return files;
}

HttpResponse Refuse(const HttpRequest&) { return {0, "", "network disabled in test"}; }

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::TempDir("pipeline");
    SyntheticOptions options;
    options.templates = 12;
    options.extras = true;
    WriteSyntheticData(MakeSyntheticData(options), dir_);
    config_ = LoadRunConfig(dir_ / "config.toml");
  }

  RunResult Run(Stage stage, const fs::path& out, HttpTransport* transport) {
    RunOptions options;
    options.stage = stage;
    options.out = out;
    options.transport = transport;
    options.retry.sleep = [](std::chrono::milliseconds) {};
    return RunPipeline(config_, options);
  }

  fs::path dir_;
  RunConfig config_;
};

TEST_F(PipelineTest, OfflineRunMakesNoCallsAndWritesBundle) {
  RecordingTransport transport(Refuse);
  const RunResult r = Run(Stage::kAll, dir_ / "out", &transport);
  ASSERT_EQ(r.exit_code, 0) << r.error_json;
  EXPECT_EQ(transport.call_count(), 0u);
  ASSERT_TRUE(r.bundle.has_value());
  const fs::path report = dir_ / "out" / "report";
  ASSERT_TRUE(fs::exists(report / "manifest.json"));
  const json manifest = json::parse(ReadFile(report / "manifest.json"));
  ASSERT_FALSE(manifest.at("files").empty());
  for (const auto& f : manifest.at("files")) {
    const fs::path p = report / f.at("name").get<std::string>();
    ASSERT_TRUE(fs::exists(p)) << p;
    EXPECT_EQ(Sha256Hex(ReadFile(p)), f.at("sha256").get<std::string>()) << p;
  }
  for (const char* stage : {"ingest", "score", "bias", "debias", "annotate", "scm",
                            "cluster", "calibrate", "metrics"}) {
    EXPECT_TRUE(fs::is_directory(dir_ / "out" / "stages" / stage)) << stage;
  }
}

TEST_F(PipelineTest, RepeatedRunsAreByteIdentical) {
  RecordingTransport transport(Refuse);
  ASSERT_EQ(Run(Stage::kAll, dir_ / "a", &transport).exit_code, 0);
  ASSERT_EQ(Run(Stage::kAll, dir_ / "b", &transport).exit_code, 0);
  // Warm caches must not change the result either.
  ASSERT_EQ(Run(Stage::kAll, dir_ / "a", &transport).exit_code, 0);
  EXPECT_EQ(ReadTree(dir_ / "a" / "report"), ReadTree(dir_ / "b" / "report"));
}

TEST_F(PipelineTest, StageOrderIsEnforced) {
  RecordingTransport transport(Refuse);
  const fs::path out = dir_ / "partial";
  RunResult r = Run(Stage::kBias, out, &transport);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(r.error, ErrorCode::kStageDependencyMissing);
  EXPECT_EQ(r.failed_stage, "bias");
  const json err = json::parse(r.error_json);
  EXPECT_EQ(err.at("error"), "StageDependencyMissing");
  EXPECT_EQ(err.at("stage"), "bias");
  EXPECT_EQ(err.at("exit_code"), 2);
  EXPECT_NE(err.at("message").get<std::string>().find("ingest"), std::string::npos);

  ASSERT_EQ(Run(Stage::kIngest, out, &transport).exit_code, 0);
  ASSERT_EQ(Run(Stage::kScore, out, &transport).exit_code, 0);
  r = Run(Stage::kDebias, out, &transport);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(r.error, ErrorCode::kStageDependencyMissing);
  ASSERT_EQ(Run(Stage::kBias, out, &transport).exit_code, 0);
  EXPECT_EQ(Run(Stage::kDebias, out, &transport).exit_code, 0);
  // The report renders whatever optional stages exist.
  EXPECT_EQ(Run(Stage::kReport, dir_ / "empty", &transport).error,
            ErrorCode::kStageDependencyMissing);
  const RunResult report = Run(Stage::kReport, out, &transport);
  ASSERT_EQ(report.exit_code, 0) << report.error_json;
  EXPECT_TRUE(fs::exists(out / "report" / "tables" / "bias_profile.md"));
  EXPECT_FALSE(fs::exists(out / "report" / "plots" / "scm_scatter.csv"));
}

TEST_F(PipelineTest, ExitCodes) {
  EXPECT_EQ(ExitCodeFor(ErrorCode::kConfigInvalid), 2);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kStageDependencyMissing), 2);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kBackendUnavailable), 3);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kQuotaExceeded), 3);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kMalformedRow), 4);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kMissingScore), 4);
}

// Every backend talks to a fake service through the transport.
class ServicePipelineTest : public PipelineTest {
 protected:
  void SetUp() override {
    PipelineTest::SetUp();
    const std::string text = ReadFile(dir_ / "config.toml");
    std::string edited = testing::ReplaceAll(text, "backend = \"builtin_lexicon\"",
                                             "backend = \"http_scoring_service\"\n"
                                             "endpoint = \"http://scorer.test\"\n"
                                             "rate_limit = 100000.0");
    edited = testing::ReplaceAll(edited, "mode = \"ingest_responses\"",
                                 "mode = \"call_service\"\n"
                                 "endpoint = \"http://llm.test\"\nmodel = \"m\"\n"
                                 "rate_limit = 100000.0");
    edited = testing::ReplaceAll(edited, "emotion_replies = \"emotion_replies.jsonl\"\n", "");
    edited = testing::ReplaceAll(edited,
                                 "stereotype_replies = \"stereotype_replies.jsonl\"\n", "");
    edited = testing::ReplaceAll(edited, "endpoint = \"\"\nseed_cache = \"nli_logits.jsonl\"",
                                 "endpoint = \"http://nli.test\"\nrate_limit = 100000.0");
    ASSERT_NE(edited.find("http://nli.test"), std::string::npos);
    ASSERT_NE(edited.find("call_service"), std::string::npos);
    WriteFile(dir_ / "service.toml", edited);
    setenv("ANNOTATOR_API_KEY", "test-annotator-key", 1);
    config_ = LoadRunConfig(dir_ / "service.toml");
  }
  void TearDown() override { unsetenv("ANNOTATOR_API_KEY"); }

  static HttpResponse Serve(const HttpRequest& req) {
    const json body = json::parse(req.body);
    if (req.url == "http://scorer.test/v1/score") {
      json scores = json::array();
      for (const auto& t : body.at("texts")) {
        const std::string s = t.get<std::string>();
        scores.push_back(s.find("hate") != std::string::npos ? 0.75 : 0.25);
      }
      return {200, json{{"scores", scores}}.dump(), ""};
    }
    if (req.url == "http://nli.test/v1/nli") {
      const double h = static_cast<double>(body.at("hypothesis").get<std::string>().size() % 7);
      const double p = static_cast<double>(body.at("premise").get<std::string>().size() % 5);
      return {200, json{{"logits", {{"entail", h - p}, {"contradict", p - h}, {"neutral", 0.0}}}}
                       .dump(), ""};
    }
    if (req.url == "http://llm.test/v1/chat/completions") {
      const std::string system = body.at("messages").at(0).at("content");
      const bool emotion = system.find("identify emotions") != std::string::npos;
      const std::string content = emotion ? "anger" : "\"hate\"";
      return {200, json{{"choices", {{{"message", {{"content", content}}}}}}}.dump(), ""};
    }
    return {404, "", ""};
  }
};

TEST_F(ServicePipelineTest, UsesServicesThenResumesFromCaches) {
  RecordingTransport transport(Serve);
  const RunResult first = Run(Stage::kAll, dir_ / "svc", &transport);
  ASSERT_EQ(first.exit_code, 0) << first.error_json;
  std::map<std::string, int> by_host;
  for (const auto& req : transport.requests()) {
    by_host[SplitUrl(req.url).scheme_host_port]++;
    if (req.url.find("llm.test") != std::string::npos) {
      EXPECT_EQ(req.headers.at("Authorization"), "Bearer test-annotator-key");
    }
  }
  EXPECT_GT(by_host["http://scorer.test"], 0);
  EXPECT_GT(by_host["http://nli.test"], 0);
  EXPECT_GT(by_host["http://llm.test"], 0);
  const std::string config_text = ReadFile(dir_ / "service.toml");
  EXPECT_EQ(config_text.find("test-annotator-key"), std::string::npos);

  const auto before = ReadTree(dir_ / "svc" / "report");
  RecordingTransport second_transport(Serve);
  const RunResult second = Run(Stage::kAll, dir_ / "svc", &second_transport);
  ASSERT_EQ(second.exit_code, 0) << second.error_json;
  EXPECT_EQ(second_transport.call_count(), 0u);
  EXPECT_EQ(ReadTree(dir_ / "svc" / "report"), before);
}

TEST_F(ServicePipelineTest, BackendOutageMapsToExitThree) {
  RecordingTransport transport([](const HttpRequest&) { return HttpResponse{503, "", ""}; });
  const RunResult r = Run(Stage::kAll, dir_ / "down", &transport);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(r.error, ErrorCode::kBackendUnavailable);
  EXPECT_EQ(r.failed_stage, "score");
}

TEST_F(ServicePipelineTest, OfflineRefusesServices) {
  RunOptions options;
  options.out = dir_ / "offline";
  options.offline = true;
  options.retry.sleep = [](std::chrono::milliseconds) {};
  const RunResult r = RunPipeline(config_, options);
  EXPECT_EQ(r.exit_code, 3) << r.error_json;
}

int RunCli(const std::string& args) {
  const std::string cmd = std::string(HSAUDIT_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(PipelineTest, CliRunsAreReproducible) {
  const std::string config = (dir_ / "config.toml").string();
  ASSERT_EQ(RunCli("--config " + config + " --offline -q --out " + (dir_ / "c1").string()), 0);
  ASSERT_EQ(RunCli("--config " + config + " --offline -q --out " + (dir_ / "c2").string()), 0);
  EXPECT_EQ(ReadTree(dir_ / "c1" / "report"), ReadTree(dir_ / "c2" / "report"));
  EXPECT_EQ(RunCli("--config " + config + " --stage nonsense"), 2);
  EXPECT_EQ(RunCli("--config " + (dir_ / "missing.toml").string()), 2);
  EXPECT_EQ(RunCli("--config " + config + " --offline --stage bias --out " +
                   (dir_ / "c3").string()),
            2);
}

}  // namespace
}  // namespace hsaudit
