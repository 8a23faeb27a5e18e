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

#ifndef HSAUDIT_CORPUS_H_
#define HSAUDIT_CORPUS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hsaudit/identity.h"

namespace hsaudit {

struct TestCase {
  std::string case_id;
  std::string text;
  TargetIdentity identity;
  std::string functionality;  // as given by the source file
  GoldLabel gold = GoldLabel::kNonHateful;
  std::optional<std::string> template_id;
  std::string dataset;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

// Seven instantiations of one template, ordered by kNamedIdentities.
struct TemplateGroup {
  std::string template_id;
  std::vector<TestCase> cases;
};

// Immutable, validated collection of test cases with lookup by case id.
class Corpus {
 public:
  Corpus() = default;
  // Validates non-empty text and unique case ids; throws on violation.
  Corpus(std::string name, std::vector<TestCase> cases);

  const std::string& name() const { return name_; }
  const std::vector<TestCase>& cases() const { return cases_; }
  std::size_t size() const { return cases_.size(); }
  bool empty() const { return cases_.empty(); }

  const TestCase* Find(std::string_view case_id) const;
  // Throws Error(kUnknownCaseId).
  const TestCase& Get(std::string_view case_id) const;

  std::vector<const TestCase*> WithIdentity(const TargetIdentity& t) const;
  std::vector<const TestCase*> WithFunctionality(std::string_view f) const;
  std::vector<const TestCase*> WithTemplate(std::string_view template_id) const;

 private:
  std::string name_;
  std::vector<TestCase> cases_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

enum class CorpusFormat { kHateCheckCsv, kGptHateCheckCsv, kGenericCsv };

std::optional<CorpusFormat> ParseCorpusFormat(std::string_view name);
std::string_view CorpusFormatName(CorpusFormat format);

Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format,
                  std::string name = "");
Corpus ParseCorpus(std::string_view csv_text, CorpusFormat format,
                   std::string name);

// Generic CSV writer; LoadCorpus(kGenericCsv) reads it back unchanged.
std::string SerializeGenericCsv(const Corpus& corpus);
void SaveGenericCsv(const Corpus& corpus, const std::filesystem::path& path);

// Minimal sets: templates with exactly one case per named identity, outside
// the slur functionalities. Sorted by template id.
std::vector<TemplateGroup> BuildMinimalSets(const Corpus& corpus);

// (identity, gold) -> count over rows naming one of the seven identities.
using CorpusStats = std::map<std::pair<TargetIdentity, GoldLabel>, std::size_t>;
CorpusStats ComputeCorpusStats(const Corpus& corpus);
// Collapses the gold dimension.
std::map<TargetIdentity, std::size_t> IdentityTotals(const CorpusStats& stats);

}  // namespace hsaudit

#endif  // HSAUDIT_CORPUS_H_
