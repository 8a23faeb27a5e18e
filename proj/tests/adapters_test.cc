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


#include <chrono>
#include <cstdlib>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "httplib.h"
#include "json.hpp"

#include "hsaudit/adapters.h"
#include "hsaudit/error.h"
#include "hsaudit/transport.h"
#include "hsaudit/util.h"
#include "test_util.h"

namespace hsaudit {
namespace {

using nlohmann::json;
using testing::ErrorCodeOf;
using testing::MakeCase;
using std::chrono::milliseconds;

const std::map<TargetIdentity, double> kNoOffsets;

TEST(LexiconTest, WorkedExamples) {
  const TargetIdentity immigrants(IdentityKind::kImmigrants);
  EXPECT_DOUBLE_EQ(BuiltinLexiconScore("I hate immigrants", immigrants, kNoOffsets), 0.50);
  EXPECT_DOUBLE_EQ(BuiltinLexiconScore("", immigrants, kNoOffsets), 0.10);
  const TargetIdentity black(IdentityKind::kBlackPeople);
  const std::map<TargetIdentity, double> offsets = {{black, 0.2}};
  EXPECT_NEAR(BuiltinLexiconScore("I hate them", black, offsets), 0.70, 1e-12);
  const auto r = MakeScoreRecord("lex", "1", 0.5, 0.5);
  EXPECT_EQ(r.label, GoldLabel::kHateful);
}

TEST(LexiconTest, TermCountsFollowTheFormula) {
  const TargetIdentity t(IdentityKind::kWomen);
  const std::string h(LexiconHateTerms()[0]);
  const std::string p(LexiconPositiveTerms()[0]);
  // H = 2 adds 0.10 on top of the first hit; H - 1 is capped at 3.
  EXPECT_NEAR(BuiltinLexiconScore(h + " " + h, t, kNoOffsets), 0.60, 1e-12);
  EXPECT_NEAR(BuiltinLexiconScore(h + " " + h + " " + h + " " + h + " " + h + " " + h, t,
                                  kNoOffsets),
              0.80, 1e-12);
  EXPECT_NEAR(BuiltinLexiconScore(h + " and " + p, t, kNoOffsets), 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(BuiltinLexiconScore(p, t, kNoOffsets), 0.0);
  // Whole words only, case-insensitive.
  EXPECT_DOUBLE_EQ(BuiltinLexiconScore(ToLower(h) + "x", t, kNoOffsets), 0.10);
  std::string upper = h;
  for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  EXPECT_DOUBLE_EQ(BuiltinLexiconScore(upper + "!", t, kNoOffsets), 0.50);
}

TEST(LexiconTest, OffsetDifferencesSurviveWhenUnclamped) {
  std::mt19937_64 rng(7);
  const auto hate = LexiconHateTerms();
  std::map<TargetIdentity, double> offsets;
  for (IdentityKind k : kNamedIdentities) {
    offsets[TargetIdentity(k)] = UniformDouble(rng) * 0.3 - 0.15;
  }
  for (int trial = 0; trial < 500; ++trial) {
    std::string text = "they";
    const int hits = 1 + static_cast<int>(UniformIndex(rng, 3));
    for (int i = 0; i < hits; ++i) text += " " + std::string(hate[UniformIndex(rng, hate.size())]);
    for (IdentityKind a : kNamedIdentities) {
      for (IdentityKind b : kNamedIdentities) {
        const TargetIdentity ta(a), tb(b);
        const double sa = BuiltinLexiconScore(text, ta, offsets);
        const double sb = BuiltinLexiconScore(text, tb, offsets);
        ASSERT_GT(sa, 0.0);
        ASSERT_LT(sa, 1.0);
        EXPECT_NEAR(sa - sb, offsets[ta] - offsets[tb], 1e-12);
      }
    }
  }
}

TEST(LexiconTest, ScoresStayInUnitInterval) {
  const TargetIdentity t(IdentityKind::kMuslims);
  const std::string h(LexiconHateTerms()[0]);
  std::string many;
  for (int i = 0; i < 10; ++i) many += h + " ";
  EXPECT_DOUBLE_EQ(BuiltinLexiconScore(many, t, {{t, 0.9}}), 1.0);
  EXPECT_DOUBLE_EQ(BuiltinLexiconScore("x", t, {{t, -0.9}}), 0.0);
}

TEST(ScoreRecordJsonlTest, RoundTrips) {
  const std::vector<ScoreRecord> records = {MakeScoreRecord("m", "a", 0.25, 0.5),
                                            MakeScoreRecord("m", "b", 0.75, 0.5)};
  const std::string text = ScoreRecordsToJsonl(records);
  EXPECT_EQ(SplitLines(text)[0],
            R"({"model_id":"m","case_id":"a","score":0.25,"label":"non-hateful"})");
  EXPECT_EQ(ScoreRecordsFromJsonl(text), records);
  EXPECT_EQ(ErrorCodeOf([] { ScoreRecordsFromJsonl(R"({"model_id":"m"})"); }),
            ErrorCode::kMalformedRow);
}

TEST(ScoreCacheTest, AppendsJsonLinesAndReloads) {
  const auto dir = testing::TempDir("score_cache");
  const auto path = dir / "sub" / "scores.jsonl";
  {
    ScoreCache cache = ScoreCache::Open(path);
    EXPECT_TRUE(cache.Insert("m", "1", 0.5));
    EXPECT_TRUE(cache.Insert("m", "2", 0.125));
    EXPECT_FALSE(cache.Insert("m", "1", 0.9));
  }
  const auto lines = SplitLines(ReadFile(path));
  ASSERT_EQ(lines.size(), 2u);
  const json first = json::parse(lines[0]);
  EXPECT_EQ(first["model_id"], "m");
  EXPECT_EQ(first["case_id"], "1");
  EXPECT_EQ(first["score"], 0.5);
  const ScoreCache again = ScoreCache::Open(path);
  EXPECT_EQ(again.size(), 2u);
  EXPECT_EQ(again.Lookup("m", "1"), 0.5);
  EXPECT_EQ(again.Lookup("m", "2"), 0.125);
  EXPECT_FALSE(again.Lookup("other", "1").has_value());
}

TEST(ScoreCacheTest, CorruptLineIsIncompleteCache) {
  const auto dir = testing::TempDir("score_cache_bad");
  WriteFile(dir / "s.jsonl", "{\"model_id\":\"m\",\"case_id\":\"1\",\"score\":0.5}\n{\"model_id\":\"m\",\"ca");
  EXPECT_EQ(ErrorCodeOf([&] { ScoreCache::Open(dir / "s.jsonl"); }), ErrorCode::kIncompleteCache);
  WriteFile(dir / "r.jsonl", "{\"model_id\":\"m\",\"case_id\":\"1\",\"score\":1.5}\n");
  EXPECT_EQ(ErrorCodeOf([&] { ScoreCache::Open(dir / "r.jsonl"); }), ErrorCode::kIncompleteCache);
}

TEST(NliCacheTest, LineFormatAndCorruption) {
  const auto dir = testing::TempDir("nli_cache");
  {
    NliCache cache = NliCache::Open(dir / "nli.jsonl");
    EXPECT_TRUE(cache.Insert("c1", HypothesisKind::kCompetenceNeg, {2.0, -1.0, 0.5}));
  }
  const json line = json::parse(SplitLines(ReadFile(dir / "nli.jsonl"))[0]);
  EXPECT_EQ(line["case_id"], "c1");
  EXPECT_EQ(line["kind"], "competence_neg");
  EXPECT_EQ(line["logits"], json::array({2.0, -1.0, 0.5}));
  const NliCache again = NliCache::Open(dir / "nli.jsonl");
  EXPECT_EQ(again.Lookup("c1", HypothesisKind::kCompetenceNeg), (NliLogits{2.0, -1.0, 0.5}));

  WriteFile(dir / "bad.jsonl", R"({"case_id":"c1","kind":"warmth_pos","logits":[1,2]})" "\n");
  EXPECT_EQ(ErrorCodeOf([&] { NliCache::Open(dir / "bad.jsonl"); }), ErrorCode::kIncompleteCache);
  WriteFile(dir / "kind.jsonl", R"({"case_id":"c1","kind":"warmth","logits":[1,2,3]})" "\n");
  EXPECT_EQ(ErrorCodeOf([&] { NliCache::Open(dir / "kind.jsonl"); }), ErrorCode::kIncompleteCache);
}

std::vector<TestCase> FewCases(int n) {
  std::vector<TestCase> cases;
  for (int i = 0; i < n; ++i) {
    cases.push_back(MakeCase("c" + std::to_string(i), "text number " + std::to_string(i),
                             TargetIdentity(IdentityKind::kWomen), "F1", GoldLabel::kHateful));
  }
  return cases;
}

HttpResponse Json(int status, const json& body) { return {status, body.dump(), ""}; }

// Answers /v1/score with score = 0.01 * (length of each text).
HttpResponse ScoreByLength(const HttpRequest& req) {
  const json body = json::parse(req.body);
  json scores = json::array();
  for (const auto& t : body["texts"]) scores.push_back(0.01 * t.get<std::string>().size());
  return Json(200, {{"scores", scores}});
}

ClassifierConfig HttpConfig() {
  ClassifierConfig config;
  config.model_id = "svc";
  config.backend = Backend::kHttpScoringService;
  config.endpoint = "http://scorer.test:8000/";
  config.batch_size = 2;
  config.parallelism = 2;
  config.rate_limit = 1000;
  return config;
}

RetryPolicy RecordSleeps(std::vector<milliseconds>* sleeps) {
  RetryPolicy retry;
  retry.sleep = [sleeps](milliseconds d) { sleeps->push_back(d); };
  return retry;
}

TEST(ScoreCasesTest, HttpServiceProtocolAndOrder) {
  RecordingTransport transport(ScoreByLength);
  ScoreCache cache;
  const auto cases = FewCases(5);
  const auto records = ScoreCases(HttpConfig(), cases, cache, transport);
  ASSERT_EQ(records.size(), 5u);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    EXPECT_EQ(records[i].case_id, cases[i].case_id);
    EXPECT_EQ(records[i].model_id, "svc");
    EXPECT_DOUBLE_EQ(records[i].score, 0.01 * cases[i].text.size());
  }
  EXPECT_EQ(transport.call_count(), 3u);  // batches of two
  for (const auto& req : transport.requests()) {
    EXPECT_EQ(req.url, "http://scorer.test:8000/v1/score");
    const json body = json::parse(req.body);
    EXPECT_EQ(body["model_id"], "svc");
    EXPECT_TRUE(body["texts"].is_array());
    EXPECT_EQ(body.size(), 2u);
  }
}

TEST(ScoreCasesTest, WarmCacheIsIdempotentAndSilent) {
  RecordingTransport transport(ScoreByLength);
  ScoreCache cache;
  const auto cases = FewCases(4);
  const auto first = ScoreCases(HttpConfig(), cases, cache, transport);
  const std::size_t calls = transport.call_count();
  const auto second = ScoreCases(HttpConfig(), cases, cache, transport);
  EXPECT_EQ(first, second);
  EXPECT_EQ(transport.call_count(), calls);
}

TEST(ScoreCasesTest, AllCachedMeansZeroCalls) {
  RecordingTransport transport(ScoreByLength);
  ScoreCache cache;
  const auto cases = FewCases(3);
  for (const auto& c : cases) cache.Insert("svc", c.case_id, 0.3);
  const auto records = ScoreCases(HttpConfig(), cases, cache, transport);
  EXPECT_EQ(transport.call_count(), 0u);
  for (const auto& r : records) EXPECT_DOUBLE_EQ(r.score, 0.3);
}

TEST(ScoreCasesTest, OnlyMissesReachTheBackend) {
  RecordingTransport transport(ScoreByLength);
  ScoreCache cache;
  const auto cases = FewCases(3);
  cache.Insert("svc", "c0", 0.9);
  cache.Insert("svc", "c2", 0.9);
  ScoreCases(HttpConfig(), cases, cache, transport);
  ASSERT_EQ(transport.call_count(), 1u);
  const json body = json::parse(transport.requests()[0].body);
  EXPECT_EQ(body["texts"], json::array({"text number 1"}));
}

TEST(ScoreCasesTest, ServerErrorsRetryWithBackoffThenFailNamingCases) {
  std::vector<milliseconds> sleeps;
  RecordingTransport transport([](const HttpRequest&) {
    return Json(503, {{"error", "loading"}});
  });
  ScoreCache cache;
  auto config = HttpConfig();
  config.parallelism = 1;
  config.batch_size = 8;
  try {
    ScoreCases(config, FewCases(2), cache, transport, RecordSleeps(&sleeps));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
    EXPECT_NE(e.detail().find("c0"), std::string::npos);
    EXPECT_NE(e.detail().find("c1"), std::string::npos);
  }
  EXPECT_EQ(transport.call_count(), 4u);
  EXPECT_EQ(sleeps, (std::vector<milliseconds>{milliseconds(1000), milliseconds(2000),
                                               milliseconds(4000)}));
  EXPECT_EQ(cache.size(), 0u);
}

TEST(ScoreCasesTest, QuotaExceededAfterRepeated429) {
  std::vector<milliseconds> sleeps;
  RecordingTransport transport([](const HttpRequest&) {
    return Json(429, {{"error", "quota"}});
  });
  ScoreCache cache;
  EXPECT_EQ(ErrorCodeOf([&] {
              ScoreCases(HttpConfig(), FewCases(1), cache, transport, RecordSleeps(&sleeps));
            }),
            ErrorCode::kQuotaExceeded);
  EXPECT_EQ(sleeps.size(), 3u);
}

TEST(ScoreCasesTest, TransientFailureRecovers) {
  int calls = 0;
  std::vector<milliseconds> sleeps;
  RecordingTransport transport([&](const HttpRequest& r) {
    if (++calls <= 2) return HttpResponse{0, "", "connection refused"};
    return ScoreByLength(r);
  });
  ScoreCache cache;
  auto config = HttpConfig();
  config.parallelism = 1;
  const auto records = ScoreCases(config, FewCases(1), cache, transport, RecordSleeps(&sleeps));
  EXPECT_EQ(records.size(), 1u);
  EXPECT_EQ(sleeps, (std::vector<milliseconds>{milliseconds(1000), milliseconds(2000)}));
}

TEST(ScoreCasesTest, ClientErrorIsNotRetried) {
  std::vector<milliseconds> sleeps;
  RecordingTransport transport([](const HttpRequest&) {
    return Json(404, {{"error", "unknown model"}});
  });
  ScoreCache cache;
  EXPECT_EQ(ErrorCodeOf([&] {
              ScoreCases(HttpConfig(), FewCases(1), cache, transport, RecordSleeps(&sleeps));
            }),
            ErrorCode::kBackendUnavailable);
  EXPECT_EQ(transport.call_count(), 1u);
  EXPECT_TRUE(sleeps.empty());
}

TEST(ScoreCasesTest, MalformedResponses) {
  ScoreCache cache;
  for (const std::string body : {"not json", R"({"scores":[0.1]})", R"({"scores":[0.1,1.7]})",
                                 R"({"scores":[0.1,"x"]})", R"({"s":[]})"}) {
    RecordingTransport transport([&](const HttpRequest&) { return HttpResponse{200, body, ""}; });
    EXPECT_EQ(ErrorCodeOf([&] { ScoreCases(HttpConfig(), FewCases(2), cache, transport); }),
              ErrorCode::kMalformedResponse)
        << body;
  }
  EXPECT_EQ(cache.size(), 0u);
}

TEST(ScoreCasesTest, RemoteAttributeApiUsesEnvironmentKey) {
  ::setenv("HSAUDIT_TEST_SCORER_KEY", "k123", 1);
  ClassifierConfig config;
  config.model_id = "persp";
  config.backend = Backend::kRemoteAttributeApi;
  config.attribute = "IDENTITY_ATTACK";
  config.api_key_env = "HSAUDIT_TEST_SCORER_KEY";
  config.rate_limit = 1000;
  RecordingTransport transport([](const HttpRequest&) {
    return Json(200, {{"attributeScores",
                       {{"IDENTITY_ATTACK", {{"summaryScore", {{"value", 0.875}}}}}}}});
  });
  ScoreCache cache;
  const auto records = ScoreCases(config, FewCases(1), cache, transport);
  EXPECT_DOUBLE_EQ(records[0].score, 0.875);
  ASSERT_EQ(transport.call_count(), 1u);
  const auto req = transport.requests()[0];
  EXPECT_EQ(req.url, std::string(kDefaultAttributeEndpoint) + "?key=k123");
  const json body = json::parse(req.body);
  EXPECT_EQ(body["comment"]["text"], "text number 0");
  EXPECT_TRUE(body["requestedAttributes"].contains("IDENTITY_ATTACK"));
  ::unsetenv("HSAUDIT_TEST_SCORER_KEY");
}

TEST(ScoreCasesTest, CacheFileBackendReportsMissingCases) {
  const auto dir = testing::TempDir("cache_backend");
  WriteFile(dir / "src.jsonl", R"({"model_id":"m","case_id":"c0","score":0.4})" "\n");
  ClassifierConfig config;
  config.model_id = "m";
  config.backend = Backend::kCacheFile;
  config.cache_path = dir / "src.jsonl";
  OfflineTransport offline;
  ScoreCache cache;
  EXPECT_DOUBLE_EQ(ScoreCases(config, FewCases(1), cache, offline)[0].score, 0.4);
  try {
    ScoreCache fresh;
    ScoreCases(config, FewCases(2), fresh, offline);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompleteCache);
    EXPECT_NE(e.detail().find("c1"), std::string::npos);
  }
  EXPECT_EQ(offline.attempts(), 0);
}

TEST(ScoreCasesTest, InvalidConfigIsRejected) {
  auto config = HttpConfig();
  config.endpoint.clear();
  ScoreCache cache;
  OfflineTransport offline;
  EXPECT_EQ(ErrorCodeOf([&] { ScoreCases(config, FewCases(1), cache, offline); }),
            ErrorCode::kConfigInvalid);
  config = HttpConfig();
  config.threshold = 1.5;
  EXPECT_EQ(ErrorCodeOf([&] { config.Validate(); }), ErrorCode::kConfigInvalid);
}

TEST(NliTest, LogitsPassThroughVerbatim) {
  RecordingTransport transport([](const HttpRequest&) {
    return Json(200, {{"logits", {{"entail", 2.0}, {"contradict", -1.0}, {"neutral", 0.5}}}});
  });
  const std::string premise = "She said \xE2\x80\x9Cno\xE2\x80\x9D \xE2\x80\x94 and left.";
  const std::string hypothesis = "This message expresses warmth towards women.";
  const NliLogits l = NliScore(transport, "http://nli.test", premise, hypothesis);
  EXPECT_EQ(l, (NliLogits{2.0, -1.0, 0.5}));
  const auto req = transport.requests()[0];
  EXPECT_EQ(req.url, "http://nli.test/v1/nli");
  const json body = json::parse(req.body);
  EXPECT_EQ(body["premise"], premise);
  EXPECT_EQ(body["hypothesis"], hypothesis);
}

TEST(NliTest, MissingLogitIsMalformed) {
  RecordingTransport transport([](const HttpRequest&) {
    return Json(200, {{"logits", {{"entail", 2.0}, {"neutral", 0.5}}}});
  });
  EXPECT_EQ(ErrorCodeOf([&] { NliScore(transport, "http://nli.test", "p", "h"); }),
            ErrorCode::kMalformedResponse);
}

TEST(NliTest, FetchIsCacheFirstAndNeedsEndpointForMisses) {
  RecordingTransport transport([](const HttpRequest&) {
    return Json(200, {{"logits", {{"entail", 1.0}, {"contradict", 0.0}, {"neutral", 0.0}}}});
  });
  NliCache cache;
  cache.Insert("a", HypothesisKind::kWarmthPos, {5, 5, 5});
  const std::vector<NliRequest> reqs = {{"a", HypothesisKind::kWarmthPos, "p", "h"},
                                        {"b", HypothesisKind::kWarmthNeg, "p", "h"}};
  NliFetchOptions cache_only;
  EXPECT_EQ(ErrorCodeOf([&] { FetchNliLogits(reqs, cache, transport, cache_only); }),
            ErrorCode::kIncompleteCache);
  NliFetchOptions options;
  options.endpoint = "http://nli.test";
  options.rate_limit = 1000;
  const auto out = FetchNliLogits(reqs, cache, transport, options);
  EXPECT_EQ(transport.call_count(), 1u);
  EXPECT_EQ(out[0].logits, (NliLogits{5, 5, 5}));
  EXPECT_EQ(out[1].logits, (NliLogits{1, 0, 0}));
  EXPECT_EQ(out[1].case_id, "b");
}

TEST(ChatTest, SendsBearerKeyAndParsesContent) {
  RecordingTransport transport([](const HttpRequest&) {
    return Json(200, {{"choices", {{{"message", {{"role", "assistant"}, {"content", "Anger"}}}}}}});
  });
  EXPECT_EQ(CompleteChat(transport, "http://llm.test", "gpt-4o", "sys", "usr", "sk"), "Anger");
  const auto req = transport.requests()[0];
  EXPECT_EQ(req.url, "http://llm.test/v1/chat/completions");
  EXPECT_EQ(req.headers.at("Authorization"), "Bearer sk");
  const json body = json::parse(req.body);
  EXPECT_EQ(body["messages"][0]["content"], "sys");
  EXPECT_EQ(body["messages"][1]["role"], "user");
}

TEST(FanOutTest, ReportsIncompleteUnits) {
  std::atomic<int> done{0};
  auto failure = RunFanOut(20, 3, 1e6, [&](std::size_t i) {
    if (i == 4) throw Error(ErrorCode::kBackendUnavailable, "boom");
    ++done;
  });
  ASSERT_TRUE(failure.has_value());
  EXPECT_NE(std::find(failure->incomplete.begin(), failure->incomplete.end(), 4u),
            failure->incomplete.end());
  EXPECT_EQ(static_cast<std::size_t>(done.load()) + failure->incomplete.size(), 20u);
  EXPECT_FALSE(RunFanOut(5, 2, 1e6, [](std::size_t) {}).has_value());
}

TEST(TransportTest, JoinUrl) {
  EXPECT_EQ(JoinUrl("http://h:1/", "/v1/nli"), "http://h:1/v1/nli");
  EXPECT_EQ(JoinUrl("http://h:1", "/v1/nli"), "http://h:1/v1/nli");
  const auto parts = SplitUrl("http://h:1/v1/score?key=x");
  EXPECT_EQ(parts.scheme_host_port, "http://h:1");
  EXPECT_EQ(parts.path_and_query, "/v1/score?key=x");
}

// A real HTTP server on the loopback interface speaking the service protocol.
class LocalService : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/score", [](const httplib::Request& req, httplib::Response& res) {
      const json body = json::parse(req.body, nullptr, false);
      if (!body.is_object() || body.value("model_id", "") != "served") {
        res.status = 404;
        res.set_content(R"({"error":"unknown model"})", "application/json");
        return;
      }
      if (body["texts"].empty()) {
        res.status = 422;
        res.set_content(R"({"error":"empty text list"})", "application/json");
        return;
      }
      json scores = json::array();
      for (const auto& t : body["texts"]) {
        scores.push_back(t.get<std::string>().find("hate") != std::string::npos ? 0.9 : 0.1);
      }
      res.set_content(json{{"scores", scores}}.dump(), "application/json");
    });
    server_.Post("/v1/nli", [](const httplib::Request& req, httplib::Response& res) {
      const json body = json::parse(req.body, nullptr, false);
      if (!body.is_object() || !body.contains("premise") || !body.contains("hypothesis")) {
        res.status = 422;
        res.set_content(R"({"error":"missing field"})", "application/json");
        return;
      }
      const bool same = body["premise"] == body["hypothesis"];
      res.set_content(
          json{{"logits", {{"entail", same ? 4.0 : 0.5}, {"contradict", -1.0}, {"neutral", 0.25}}}}
              .dump(),
          "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  std::string Base() const { return "http://127.0.0.1:" + std::to_string(port_); }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST_F(LocalService, ScoresOverRealHttp) {
  NetworkTransport transport(std::chrono::seconds(5));
  auto config = HttpConfig();
  config.model_id = "served";
  config.endpoint = Base();
  std::vector<TestCase> cases = FewCases(2);
  cases[1].text = "I hate them";
  ScoreCache cache;
  const auto records = ScoreCases(config, cases, cache, transport);
  EXPECT_DOUBLE_EQ(records[0].score, 0.1);
  EXPECT_DOUBLE_EQ(records[1].score, 0.9);
  EXPECT_EQ(records[1].label, GoldLabel::kHateful);
}

TEST_F(LocalService, UnknownModelIs404) {
  NetworkTransport transport(std::chrono::seconds(5));
  auto config = HttpConfig();
  config.model_id = "nope";
  config.endpoint = Base();
  ScoreCache cache;
  try {
    ScoreCases(config, FewCases(1), cache, transport);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
    EXPECT_NE(e.detail().find("404"), std::string::npos);
    EXPECT_NE(e.detail().find("c0"), std::string::npos);
  }
}

TEST_F(LocalService, NliOverRealHttp) {
  NetworkTransport transport(std::chrono::seconds(5));
  const std::string premise = "Caf\xC3\xA9 \xE2\x80\x9Cquotes\xE2\x80\x9D";
  const NliLogits same = NliScore(transport, Base(), premise, premise);
  EXPECT_EQ(same, (NliLogits{4.0, -1.0, 0.25}));
  const NliLogits other = NliScore(transport, Base(), premise, "something else");
  EXPECT_EQ(other.entail, 0.5);
}

TEST(NetworkTransportTest, ConnectionFailureIsBackendUnavailable) {
  // Port 1 (tcpmux) is privileged and unused here, so connects are refused.
  const int port = 1;
  NetworkTransport transport(std::chrono::seconds(2));
  std::vector<milliseconds> sleeps;
  EXPECT_EQ(ErrorCodeOf([&] {
              NliScore(transport, "http://127.0.0.1:" + std::to_string(port), "p", "h",
                       RecordSleeps(&sleeps));
            }),
            ErrorCode::kBackendUnavailable);
  EXPECT_EQ(sleeps.size(), 3u);
}

}  // namespace
}  // namespace hsaudit
