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

#ifndef HSAUDIT_IDENTITY_H_
#define HSAUDIT_IDENTITY_H_

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace hsaudit {

enum class IdentityKind {
  kWomen,
  kTransPeople,
  kGayPeople,
  kBlackPeople,
  kDisabledPeople,
  kMuslims,
  kImmigrants,
  kOther,
};

inline constexpr std::array<IdentityKind, 7> kNamedIdentities = {
    IdentityKind::kWomen,       IdentityKind::kTransPeople,
    IdentityKind::kGayPeople,   IdentityKind::kBlackPeople,
    IdentityKind::kDisabledPeople, IdentityKind::kMuslims,
    IdentityKind::kImmigrants,
};

// A protected group referenced by a message. The seven named identities are
// the ones shared by both functionality-test datasets; everything else is
// carried as a free-form tag. Rows that target no protected group are tagged
// Other("none").
class TargetIdentity {
 public:
  TargetIdentity() : kind_(IdentityKind::kOther), tag_("none") {}
  explicit TargetIdentity(IdentityKind kind) : kind_(kind) {
    if (kind == IdentityKind::kOther) tag_ = "none";
  }
  static TargetIdentity Other(std::string tag);
  static TargetIdentity None() { return Other("none"); }

  // Case-insensitive parse of dataset spellings ("women", "Trans people",
  // "gays", "Black", ...). Empty / "nan" / "none" map to None(); anything
  // unrecognised becomes Other(text).
  static TargetIdentity Parse(std::string_view text);

  IdentityKind kind() const { return kind_; }
  bool is_named() const { return kind_ != IdentityKind::kOther; }
  bool is_none() const { return kind_ == IdentityKind::kOther && tag_ == "none"; }
  const std::string& tag() const { return tag_; }

  // Canonical surface string used in prompts and hypotheses ("women",
  // "trans people", ..., "Muslims"). For Other this is the tag itself.
  std::string SurfaceString() const;
  // Stable snake_case key for JSON/config ("women", "black_people", ...).
  std::string Key() const;
  // Short display label for report tables ("Women", "Trans ppl.", ...).
  std::string DisplayName() const;

  friend bool operator==(const TargetIdentity&, const TargetIdentity&) = default;
  friend std::strong_ordering operator<=>(const TargetIdentity& a,
                                          const TargetIdentity& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.tag_ <=> b.tag_;
  }

 private:
  IdentityKind kind_;
  std::string tag_;
};

// Parses Key() output as well as anything Parse() accepts.
std::optional<TargetIdentity> ParseIdentityKey(std::string_view key);

enum class GoldLabel { kHateful, kNonHateful };

std::string_view GoldLabelName(GoldLabel label);  // "hateful" / "non-hateful"
std::optional<GoldLabel> ParseGoldLabel(std::string_view text);

// Functionality ids F1..F24 (shared by both datasets) and F25..F29 (the
// spelling-variation block only present in the template dataset).
struct FunctionalityInfo {
  int number;             // 1..29
  std::string_view code;  // dataset column value, e.g. "derog_neg_emote_h"
  GoldLabel gold;
};

// Accepts "F4", "f4" or the dataset code "derog_impl_h".
std::optional<FunctionalityInfo> LookupFunctionality(std::string_view name);

// Template functionalities built around target-specific slurs (F7-F9).
bool IsSlurFunctionality(const FunctionalityInfo& info);

}  // namespace hsaudit

#endif  // HSAUDIT_IDENTITY_H_
