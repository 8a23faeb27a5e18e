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


#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "hsaudit/bias.h"
#include "hsaudit/error.h"
#include "hsaudit/synthetic.h"
#include "hsaudit/transport.h"
#include "oracles.h"
#include "test_util.h"

namespace hsaudit {
namespace {

using testing::ErrorCodeOf;
using testing::MakeCase;

TemplateGroup Group(const std::string& tid) {
  TemplateGroup g;
  g.template_id = tid;
  for (IdentityKind k : kNamedIdentities) {
    const TargetIdentity t(k);
    g.cases.push_back(MakeCase(tid + "-" + t.Key(), "x", t, "F1", GoldLabel::kHateful, tid));
  }
  return g;
}

std::vector<ScoreRecord> Scores(const TemplateGroup& g, const std::vector<double>& s) {
  std::vector<ScoreRecord> out;
  for (std::size_t i = 0; i < g.cases.size(); ++i) {
    out.push_back(MakeScoreRecord("m", g.cases[i].case_id, s[i], 0.5));
  }
  return out;
}

std::vector<double> Normalize(const std::vector<double>& s) {
  const TemplateGroup g = Group("t");
  std::vector<TemplateGroup> groups = {g};
  const auto records = Scores(g, s);
  std::vector<double> out;
  for (const auto& n : NormalizeByTemplate(groups, records)) out.push_back(n.normalized);
  return out;
}

void ExpectNear(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << i;
}

TEST(NormalizeTest, WorkedExamples) {
  ExpectNear(Normalize({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}),
             {-0.3, -0.2, -0.1, 0, 0.1, 0.2, 0.3}, 1e-12);
  ExpectNear(Normalize({0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9}), {0, 0, 0, 0, 0, 0, 0}, 0);
  ExpectNear(Normalize({0.05, 0.05, 0.1, 0.8, 0.9, 0.9, 0.95}),
             {-0.75, -0.75, -0.7, 0, 0.1, 0.1, 0.15}, 1e-12);
}

TEST(NormalizeTest, MissingScoreThrows) {
  const TemplateGroup g = Group("t");
  std::vector<TemplateGroup> groups = {g};
  auto records = Scores(g, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7});
  records.pop_back();
  EXPECT_EQ(ErrorCodeOf([&] { NormalizeByTemplate(groups, records); }), ErrorCode::kMissingScore);
}

TEST(NormalizePropertyTest, TranslationInvarianceAndPermutationEquivariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> s(7);
    for (double& v : s) v = UniformDouble(rng) * 0.6;
    const double c = UniformDouble(rng) * 0.4 - 0.2;
    std::vector<double> shifted = s;
    for (double& v : shifted) v += c;
    ExpectNear(Normalize(s), Normalize(shifted), 1e-12);

    std::vector<std::size_t> perm = {0, 1, 2, 3, 4, 5, 6};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> permuted(7);
    for (std::size_t i = 0; i < 7; ++i) permuted[i] = s[perm[i]];
    const auto base = Normalize(s);
    const auto moved = Normalize(permuted);
    for (std::size_t i = 0; i < 7; ++i) EXPECT_DOUBLE_EQ(moved[i], base[perm[i]]);

    // Oracle: full-sort median.
    const double median = oracle::Median(s);
    for (std::size_t i = 0; i < 7; ++i) EXPECT_DOUBLE_EQ(base[i], s[i] - median);
  }
}

TEST(BiasProfileTest, AllZeroMeansZeroBias) {
  std::vector<NormalizedPrediction> normalized;
  for (IdentityKind k : kNamedIdentities) normalized.push_back({"c", "t", TargetIdentity(k), 0.0});
  const auto profile = IdentityBiasProfile(normalized, "m");
  EXPECT_EQ(profile.bias.size(), 7u);
  for (const auto& [t, b] : profile.bias) EXPECT_EQ(b, 0.0);
  normalized.pop_back();
  EXPECT_EQ(ErrorCodeOf([&] { IdentityBiasProfile(normalized, "m"); }),
            ErrorCode::kMissingIdentity);
}

TEST(BiasProfileTest, RecoversPlantedLexiconOffsets) {
  SyntheticOptions options;
  const Corpus corpus = MakeTemplateCorpus(options);
  const auto groups = BuildMinimalSets(corpus);
  ASSERT_EQ(groups.size(), 50u);
  ClassifierConfig config;
  config.model_id = "lexicon-planted";
  config.offsets = SyntheticOffsets();
  ScoreCache cache;
  OfflineTransport offline;
  const auto scores = ScoreCases(config, corpus.cases(), cache, offline);
  const auto profile = IdentityBiasProfile(NormalizeByTemplate(groups, scores), config.model_id);

  std::vector<double> offsets;
  for (IdentityKind k : kNamedIdentities) {
    auto it = config.offsets.find(TargetIdentity(k));
    offsets.push_back(it == config.offsets.end() ? 0.0 : it->second);
  }
  const double median = oracle::Median(offsets);
  for (std::size_t i = 0; i < kNamedIdentities.size(); ++i) {
    EXPECT_NEAR(profile.bias.at(TargetIdentity(kNamedIdentities[i])), offsets[i] - median, 1e-9);
  }
  EXPECT_EQ(offline.attempts(), 0);
}

TEST(DebiasTest, WorkedExamples) {
  BiasProfile p;
  p.model_id = "m";
  const TargetIdentity women(IdentityKind::kWomen);
  p.bias[women] = 0.13;
  const auto d = ApplyDebias(MakeScoreRecord("m", "a", 0.65, 0.5), p, women, 0.5);
  EXPECT_DOUBLE_EQ(d.record.score, 0.65 - 0.13);
  EXPECT_EQ(d.record.label, GoldLabel::kHateful);

  p.bias[women] = 0.0;
  const auto same = ApplyDebias(MakeScoreRecord("m", "a", 0.42, 0.5), p, women, 0.5);
  EXPECT_EQ(same.record, MakeScoreRecord("m", "a", 0.42, 0.5));

  p.bias[women] = 0.20;
  const auto low = ApplyDebias(MakeScoreRecord("m", "a", 0.05, 0.5), p, women, 0.5);
  EXPECT_NEAR(low.raw, -0.15, 1e-12);
  EXPECT_EQ(low.record.label, GoldLabel::kNonHateful);
  EXPECT_EQ(low.record.score, 0.0);
}

TEST(DebiasTest, UnknownIdentityThrows) {
  BiasProfile p;
  p.model_id = "m";
  EXPECT_EQ(ErrorCodeOf([&] {
              ApplyDebias(MakeScoreRecord("m", "a", 0.5, 0.5), p,
                          TargetIdentity(IdentityKind::kWomen), 0.5);
            }),
            ErrorCode::kUnknownIdentity);
}

TEST(DebiasPropertyTest, ReportedScoreStaysInUnitInterval) {
  std::mt19937_64 rng(3);
  BiasProfile p;
  for (IdentityKind k : kNamedIdentities) p.bias[TargetIdentity(k)] = 0;
  for (int i = 0; i < 20000; ++i) {
    const TargetIdentity t(kNamedIdentities[UniformIndex(rng, 7)]);
    p.bias[t] = UniformDouble(rng) * 2.0 - 1.0;
    const double s = UniformDouble(rng);
    const auto d = ApplyDebias(MakeScoreRecord("m", "a", s, 0.5), p, t, 0.5);
    ASSERT_GE(d.record.score, 0.0);
    ASSERT_LE(d.record.score, 1.0);
    EXPECT_EQ(d.record.label == GoldLabel::kHateful, s - p.bias[t] >= 0.5);
  }
}

TEST(BiasProfileTest, JsonRoundTrip) {
  BiasProfile p;
  p.model_id = "m";
  p.computed_on = "hatecheck";
  p.n_templates = 333;
  for (IdentityKind k : kNamedIdentities) p.bias[TargetIdentity(k)] = 0.1 * static_cast<int>(k) - 0.2;
  const BiasProfile back = BiasProfileFromJson(BiasProfileToJson(p));
  EXPECT_EQ(back.model_id, p.model_id);
  EXPECT_EQ(back.computed_on, p.computed_on);
  EXPECT_EQ(back.n_templates, p.n_templates);
  EXPECT_EQ(back.bias, p.bias);
  EXPECT_EQ(ErrorCodeOf([] { BiasProfileFromJson("{"); }), ErrorCode::kMalformedRow);
}

}  // namespace
}  // namespace hsaudit
