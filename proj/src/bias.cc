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

#include "hsaudit/bias.h"

#include <algorithm>
#include <unordered_map>

#include "json.hpp"

#include "hsaudit/error.h"

namespace hsaudit {

std::vector<NormalizedPrediction> NormalizeByTemplate(
    std::span<const TemplateGroup> groups, std::span<const ScoreRecord> scores) {
  std::unordered_map<std::string, double> by_case;
  by_case.reserve(scores.size());
  for (const auto& r : scores) by_case.emplace(r.case_id, r.score);

  std::vector<NormalizedPrediction> out;
  out.reserve(groups.size() * kNamedIdentities.size());
  std::vector<double> values;
  for (const auto& group : groups) {
    values.clear();
    for (const auto& c : group.cases) {
      auto it = by_case.find(c.case_id);
      if (it == by_case.end()) {
        throw Error(ErrorCode::kMissingScore,
                    "no score for case '" + c.case_id + "' of template '" +
                        group.template_id + "'");
      }
      values.push_back(it->second);
    }
    if (values.empty()) continue;
    // Groups are odd-sized (seven), so the median is the middle order
    // statistic; for even sizes the lower middle is used.
    std::vector<double> sorted = values;
    const std::size_t mid = (sorted.size() - 1) / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(mid), sorted.end());
    const double median = sorted[mid];
    for (std::size_t i = 0; i < group.cases.size(); ++i) {
      out.push_back({group.cases[i].case_id, group.template_id,
                     group.cases[i].identity, values[i] - median});
    }
  }
  return out;
}

BiasProfile IdentityBiasProfile(std::span<const NormalizedPrediction> normalized,
                                const std::string& model_id,
                                const std::string& computed_on) {
  std::map<TargetIdentity, std::pair<double, std::size_t>> acc;
  std::map<std::string, bool> templates;
  for (const auto& n : normalized) {
    auto& [sum, count] = acc[n.identity];
    sum += n.normalized;
    ++count;
    templates[n.template_id] = true;
  }
  BiasProfile profile;
  profile.model_id = model_id;
  profile.computed_on = computed_on;
  profile.n_templates = templates.size();
  for (IdentityKind kind : kNamedIdentities) {
    const TargetIdentity t(kind);
    auto it = acc.find(t);
    if (it == acc.end() || it->second.second == 0) {
      throw Error(ErrorCode::kMissingIdentity,
                  "no normalized predictions for identity '" + t.SurfaceString() + "'");
    }
    profile.bias[t] = it->second.first / static_cast<double>(it->second.second);
  }
  return profile;
}

DebiasedScore ApplyDebias(const ScoreRecord& record, const BiasProfile& profile,
                          const TargetIdentity& identity, double threshold) {
  auto it = profile.bias.find(identity);
  if (!identity.is_named() || it == profile.bias.end()) {
    throw Error(ErrorCode::kUnknownIdentity,
                "profile for '" + profile.model_id + "' has no bias for identity '" +
                    identity.SurfaceString() + "'");
  }
  DebiasedScore out;
  out.raw = record.score - it->second;
  out.record = record;
  out.record.score = std::clamp(out.raw, 0.0, 1.0);
  out.record.label = out.raw >= threshold ? GoldLabel::kHateful : GoldLabel::kNonHateful;
  return out;
}

std::string BiasProfileToJson(const BiasProfile& profile) {
  nlohmann::ordered_json j;
  j["model_id"] = profile.model_id;
  j["computed_on"] = profile.computed_on;
  j["bias"] = nlohmann::ordered_json::object();
  for (const auto& [t, v] : profile.bias) j["bias"][t.Key()] = v;
  j["n_templates"] = profile.n_templates;
  return j.dump(2) + "\n";
}

BiasProfile BiasProfileFromJson(std::string_view text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  try {
    if (j.is_discarded()) throw nlohmann::json::other_error::create(0, "not JSON", nullptr);
    BiasProfile p;
    p.model_id = j.at("model_id").get<std::string>();
    p.computed_on = j.value("computed_on", "");
    p.n_templates = j.at("n_templates").get<std::size_t>();
    for (const auto& [key, value] : j.at("bias").items()) {
      auto t = ParseIdentityKey(key);
      if (!t) throw Error(ErrorCode::kUnknownIdentity, "bias profile names '" + key + "'");
      p.bias[*t] = value.get<double>();
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedRow, std::string("bias profile JSON: ") + e.what());
  }
}

}  // namespace hsaudit
