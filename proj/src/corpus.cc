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

#include "hsaudit/corpus.h"

#include <algorithm>
#include <set>

#include "hsaudit/csv.h"
#include "hsaudit/error.h"
#include "hsaudit/util.h"

namespace hsaudit {
namespace {

// Column layout for one input format. An empty alias list means the column
// is optional and absent.
struct ColumnSpec {
  std::vector<std::string_view> case_id;
  std::vector<std::string_view> text;
  std::vector<std::string_view> identity;
  std::vector<std::string_view> label;
  std::vector<std::string_view> functionality;
  std::vector<std::string_view> template_id;
  bool functionality_required;
};

ColumnSpec SpecFor(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kHateCheckCsv:
      // The published file names the template column "templ_id"; both
      // spellings are accepted.
      return {{"case_id"},       {"test_case"},
              {"target_ident"},  {"label_gold"},
              {"functionality"}, {"case_templ_id", "templ_id"},
              true};
    case CorpusFormat::kGptHateCheckCsv:
      return {{"case_id"},   {"test_case"},       {"target_ident"},
              {"label_gold"}, {"functionality"}, {},
              true};
    case CorpusFormat::kGenericCsv:
      return {{"case_id"}, {"text"},          {"identity"},
              {"label"},   {"functionality"}, {"template_id"},
              false};
  }
  return {};
}

std::optional<std::size_t> FindColumn(const CsvTable& table,
                                      const std::vector<std::string_view>& names) {
  for (auto name : names) {
    if (auto idx = table.ColumnIndex(name)) return idx;
  }
  return std::nullopt;
}

std::size_t RequireColumn(const CsvTable& table,
                          const std::vector<std::string_view>& names) {
  if (auto idx = FindColumn(table, names)) return *idx;
  throw Error(ErrorCode::kMissingColumn,
              "header lacks required column '" + std::string(names.front()) +
                  "'");
}

std::string RowRef(std::size_t row, const CsvRecord& rec) {
  return "row " + std::to_string(row) + " (line " + std::to_string(rec.line) +
         ")";
}

// Orders numeric template ids numerically ("2" < "10"), anything else
// lexicographically after them.
struct TemplateIdLess {
  static bool IsNumber(const std::string& s) {
    return !s.empty() && s.size() < 18 &&
           std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  }
  bool operator()(const std::string& a, const std::string& b) const {
    const bool na = IsNumber(a);
    const bool nb = IsNumber(b);
    if (na && nb) return std::stoll(a) < std::stoll(b);
    if (na != nb) return na;
    return a < b;
  }
};

bool TargetsNoIdentity(const FunctionalityInfo& info) {
  // Abuse of objects, individuals and non-protected groups.
  return info.number >= 22 && info.number <= 24;
}

}  // namespace

Corpus::Corpus(std::string name, std::vector<TestCase> cases)
    : name_(std::move(name)), cases_(std::move(cases)) {
  by_id_.reserve(cases_.size());
  for (std::size_t i = 0; i < cases_.size(); ++i) {
    if (cases_[i].text.empty()) {
      throw Error(ErrorCode::kMalformedRow,
                  "case '" + cases_[i].case_id + "' has empty text");
    }
    if (!by_id_.emplace(cases_[i].case_id, i).second) {
      throw Error(ErrorCode::kDuplicateCaseId,
                  "case_id '" + cases_[i].case_id + "' is not unique");
    }
  }
}

const TestCase* Corpus::Find(std::string_view case_id) const {
  auto it = by_id_.find(std::string(case_id));
  return it == by_id_.end() ? nullptr : &cases_[it->second];
}

const TestCase& Corpus::Get(std::string_view case_id) const {
  const TestCase* c = Find(case_id);
  if (c == nullptr) {
    throw Error(ErrorCode::kUnknownCaseId,
                "case_id '" + std::string(case_id) + "' not in corpus '" +
                    name_ + "'");
  }
  return *c;
}

std::vector<const TestCase*> Corpus::WithIdentity(
    const TargetIdentity& t) const {
  std::vector<const TestCase*> out;
  for (const auto& c : cases_) {
    if (c.identity == t) out.push_back(&c);
  }
  return out;
}

std::vector<const TestCase*> Corpus::WithFunctionality(
    std::string_view f) const {
  std::vector<const TestCase*> out;
  for (const auto& c : cases_) {
    if (c.functionality == f) out.push_back(&c);
  }
  return out;
}

std::vector<const TestCase*> Corpus::WithTemplate(
    std::string_view template_id) const {
  std::vector<const TestCase*> out;
  for (const auto& c : cases_) {
    if (c.template_id && *c.template_id == template_id) out.push_back(&c);
  }
  return out;
}

std::optional<CorpusFormat> ParseCorpusFormat(std::string_view name) {
  const std::string lower = ToLower(Trim(name));
  if (lower == "hatecheck_csv") return CorpusFormat::kHateCheckCsv;
  if (lower == "gpt_hatecheck_csv") return CorpusFormat::kGptHateCheckCsv;
  if (lower == "generic_csv") return CorpusFormat::kGenericCsv;
  return std::nullopt;
}

std::string_view CorpusFormatName(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kHateCheckCsv: return "hatecheck_csv";
    case CorpusFormat::kGptHateCheckCsv: return "gpt_hatecheck_csv";
    case CorpusFormat::kGenericCsv: return "generic_csv";
  }
  return "";
}

Corpus ParseCorpus(std::string_view csv_text, CorpusFormat format,
                   std::string name) {
  const CsvTable table(csv_text);
  if (table.header().empty()) {
    throw Error(ErrorCode::kMissingColumn, "file has no header row");
  }
  const ColumnSpec spec = SpecFor(format);
  const std::size_t id_col = RequireColumn(table, spec.case_id);
  const std::size_t text_col = RequireColumn(table, spec.text);
  const std::size_t ident_col = RequireColumn(table, spec.identity);
  const std::size_t label_col = RequireColumn(table, spec.label);
  const std::optional<std::size_t> func_col =
      spec.functionality_required
          ? std::optional<std::size_t>(RequireColumn(table, spec.functionality))
          : FindColumn(table, spec.functionality);
  const std::optional<std::size_t> templ_col =
      spec.template_id.empty() ? std::nullopt
                               : FindColumn(table, spec.template_id);
  const std::optional<std::size_t> dataset_col =
      format == CorpusFormat::kGenericCsv ? table.ColumnIndex("dataset")
                                          : std::nullopt;

  std::vector<TestCase> cases;
  cases.reserve(table.rows().size());
  std::set<std::string> seen;
  std::size_t row = 0;
  for (const CsvRecord& rec : table.rows()) {
    ++row;
    if (rec.fields.size() < table.header().size()) {
      throw Error(ErrorCode::kMalformedRow,
                  RowRef(row, rec) + " has " +
                      std::to_string(rec.fields.size()) + " fields, header has " +
                      std::to_string(table.header().size()));
    }
    TestCase tc;
    tc.case_id = std::string(Trim(rec.fields[id_col]));
    tc.text = rec.fields[text_col];
    tc.dataset = dataset_col ? rec.fields[*dataset_col] : name;
    if (tc.case_id.empty()) {
      throw Error(ErrorCode::kMalformedRow, RowRef(row, rec) + " has no case_id");
    }
    if (Trim(tc.text).empty()) {
      throw Error(ErrorCode::kMalformedRow,
                  RowRef(row, rec) + " (case_id '" + tc.case_id +
                      "') has empty text");
    }
    if (!seen.insert(tc.case_id).second) {
      throw Error(ErrorCode::kDuplicateCaseId,
                  RowRef(row, rec) + " repeats case_id '" + tc.case_id + "'");
    }

    const std::optional<GoldLabel> label = ParseGoldLabel(rec.fields[label_col]);
    if (!label) {
      throw Error(ErrorCode::kUnknownLabel,
                  RowRef(row, rec) + " has unknown label '" +
                      rec.fields[label_col] + "'");
    }
    tc.gold = *label;
    tc.identity = TargetIdentity::Parse(rec.fields[ident_col]);

    if (func_col) {
      tc.functionality = std::string(Trim(rec.fields[*func_col]));
      if (auto info = LookupFunctionality(tc.functionality)) {
        if (info->gold != *label) {
          throw Error(ErrorCode::kUnknownLabel,
                      RowRef(row, rec) + " label '" + rec.fields[label_col] +
                          "' contradicts the fixed gold label of " +
                          tc.functionality);
        }
        tc.gold = info->gold;
        if (TargetsNoIdentity(*info)) tc.identity = TargetIdentity::None();
      }
    }
    if (templ_col) {
      std::string templ(Trim(rec.fields[*templ_col]));
      if (!templ.empty() && ToLower(templ) != "nan") {
        // "12.0" as written by pandas for float columns.
        if (templ.size() > 2 && templ.ends_with(".0")) templ.resize(templ.size() - 2);
        tc.template_id = std::move(templ);
      }
    }
    cases.push_back(std::move(tc));
  }
  return Corpus(std::move(name), std::move(cases));
}

Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format,
                  std::string name) {
  if (name.empty()) name = path.stem().string();
  return ParseCorpus(ReadFile(path), format, std::move(name));
}

std::string SerializeGenericCsv(const Corpus& corpus) {
  std::string out = CsvLine({"case_id", "text", "identity", "label",
                             "functionality", "template_id", "dataset"});
  for (const auto& c : corpus.cases()) {
    out += CsvLine({c.case_id, c.text, c.identity.SurfaceString(),
                    std::string(GoldLabelName(c.gold)), c.functionality,
                    c.template_id.value_or(""), c.dataset});
  }
  return out;
}

void SaveGenericCsv(const Corpus& corpus, const std::filesystem::path& path) {
  WriteFile(path, SerializeGenericCsv(corpus));
}

std::vector<TemplateGroup> BuildMinimalSets(const Corpus& corpus) {
  std::map<std::string, std::vector<const TestCase*>, TemplateIdLess> by_template;
  for (const auto& c : corpus.cases()) {
    if (c.template_id) by_template[*c.template_id].push_back(&c);
  }
  if (by_template.empty()) {
    throw Error(ErrorCode::kNoTemplates,
                "corpus '" + corpus.name() + "' has no template metadata");
  }

  std::vector<TemplateGroup> groups;
  for (const auto& [templ, members] : by_template) {
    if (members.size() != kNamedIdentities.size()) continue;
    bool keep = true;
    std::set<IdentityKind> kinds;
    for (const TestCase* c : members) {
      if (!c->identity.is_named()) keep = false;
      kinds.insert(c->identity.kind());
      if (auto info = LookupFunctionality(c->functionality);
          info && IsSlurFunctionality(*info)) {
        keep = false;
      }
      if (c->gold != members.front()->gold) keep = false;
    }
    if (!keep || kinds.size() != kNamedIdentities.size()) continue;

    TemplateGroup group;
    group.template_id = templ;
    for (IdentityKind kind : kNamedIdentities) {
      for (const TestCase* c : members) {
        if (c->identity.kind() == kind) group.cases.push_back(*c);
      }
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

CorpusStats ComputeCorpusStats(const Corpus& corpus) {
  CorpusStats stats;
  for (const auto& c : corpus.cases()) {
    if (!c.identity.is_named()) continue;
    ++stats[{c.identity, c.gold}];
  }
  return stats;
}

std::map<TargetIdentity, std::size_t> IdentityTotals(const CorpusStats& stats) {
  std::map<TargetIdentity, std::size_t> totals;
  for (const auto& [key, n] : stats) totals[key.first] += n;
  return totals;
}

}  // namespace hsaudit
