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


#ifndef HSAUDIT_TESTS_TEST_UTIL_H_
#define HSAUDIT_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "hsaudit/corpus.h"
#include "hsaudit/error.h"
#include "hsaudit/identity.h"
#include "hsaudit/util.h"

namespace hsaudit::testing {

inline TestCase MakeCase(std::string id, std::string text, TargetIdentity identity,
                         std::string functionality, GoldLabel gold,
                         std::optional<std::string> template_id = std::nullopt) {
  TestCase c;
  c.case_id = std::move(id);
  c.text = std::move(text);
  c.identity = std::move(identity);
  c.functionality = std::move(functionality);
  c.gold = gold;
  c.template_id = std::move(template_id);
  c.dataset = "fixture";
  return c;
}

// The code of the hsaudit::Error thrown by f, or nullopt if none was thrown.
template <typename F>
std::optional<ErrorCode> ErrorCodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// A fresh empty directory under the system temp dir.
inline std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("hsaudit_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string Golden(const std::string& name) {
  return ReadFile(std::filesystem::path(HSAUDIT_TESTDATA_DIR) / "golden" / name);
}

inline std::string ReplaceAll(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

// A corpus of n cases spread over the seven named identities with random gold
// labels, for metric oracles.
inline Corpus RandomCorpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TestCase> cases;
  for (std::size_t i = 0; i < n; ++i) {
    const auto kind = kNamedIdentities[UniformIndex(rng, kNamedIdentities.size())];
    const bool hateful = UniformDouble(rng) < 0.6;
    cases.push_back(MakeCase("c" + std::to_string(i), "text " + std::to_string(i),
                             TargetIdentity(kind),
                             hateful ? "derog_neg_emote_h" : "ident_neutral_nh",
                             hateful ? GoldLabel::kHateful : GoldLabel::kNonHateful));
  }
  return Corpus("random", std::move(cases));
}

}  // namespace hsaudit::testing

#endif  // HSAUDIT_TESTS_TEST_UTIL_H_
