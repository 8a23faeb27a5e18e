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

#ifndef HSAUDIT_BIAS_H_
#define HSAUDIT_BIAS_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hsaudit/adapters.h"
#include "hsaudit/corpus.h"

namespace hsaudit {

struct NormalizedPrediction {
  std::string case_id;
  std::string template_id;
  TargetIdentity identity;
  double normalized = 0.0;  // score - median(template scores)
};

struct BiasProfile {
  std::string model_id;
  std::string computed_on;  // corpus the minimal sets came from
  std::map<TargetIdentity, double> bias;  // the seven named identities
  std::size_t n_templates = 0;
};

// Median-centres every template group. Output follows group order, then the
// group's case order. Throws Error(kMissingScore) when a case has no record.
std::vector<NormalizedPrediction> NormalizeByTemplate(
    std::span<const TemplateGroup> groups, std::span<const ScoreRecord> scores);

// bias[t] = mean normalized prediction over identity t. Throws
// Error(kMissingIdentity) when a named identity has no predictions.
BiasProfile IdentityBiasProfile(std::span<const NormalizedPrediction> normalized,
                                const std::string& model_id,
                                const std::string& computed_on = "");

// Subtracts the identity's bias. The label is decided on the unclamped value;
// the reported score is clamped to [0,1].
struct DebiasedScore {
  ScoreRecord record;
  double raw = 0.0;  // unclamped score - bias
};
DebiasedScore ApplyDebias(const ScoreRecord& record, const BiasProfile& profile,
                          const TargetIdentity& identity, double threshold);

std::string BiasProfileToJson(const BiasProfile& profile);
BiasProfile BiasProfileFromJson(std::string_view text);

}  // namespace hsaudit

#endif  // HSAUDIT_BIAS_H_
