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

#include "hsaudit/identity.h"

#include <algorithm>

#include "hsaudit/error.h"
#include "hsaudit/util.h"

namespace hsaudit {
namespace {

struct IdentityNames {
  IdentityKind kind;
  std::string_view surface;
  std::string_view key;
  std::string_view display;
};

constexpr std::array<IdentityNames, 7> kIdentityNames = {{
    {IdentityKind::kWomen, "women", "women", "Women"},
    {IdentityKind::kTransPeople, "trans people", "trans_people", "Trans ppl."},
    {IdentityKind::kGayPeople, "gay people", "gay_people", "Gay ppl."},
    {IdentityKind::kBlackPeople, "black people", "black_people", "Black ppl."},
    {IdentityKind::kDisabledPeople, "disabled people", "disabled_people",
     "Disabled ppl."},
    {IdentityKind::kMuslims, "Muslims", "muslims", "Muslims"},
    {IdentityKind::kImmigrants, "immigrants", "immigrants", "Immigrants"},
}};

// Lowercased spellings seen in the public dataset files and common aliases.
struct Alias {
  std::string_view text;
  IdentityKind kind;
};
constexpr Alias kAliases[] = {
    {"women", IdentityKind::kWomen},
    {"woman", IdentityKind::kWomen},
    {"trans people", IdentityKind::kTransPeople},
    {"trans", IdentityKind::kTransPeople},
    {"transgender people", IdentityKind::kTransPeople},
    {"gay people", IdentityKind::kGayPeople},
    {"gays", IdentityKind::kGayPeople},
    {"gay", IdentityKind::kGayPeople},
    {"black people", IdentityKind::kBlackPeople},
    {"black", IdentityKind::kBlackPeople},
    {"disabled people", IdentityKind::kDisabledPeople},
    {"disabled", IdentityKind::kDisabledPeople},
    {"muslims", IdentityKind::kMuslims},
    {"muslim", IdentityKind::kMuslims},
    {"immigrants", IdentityKind::kImmigrants},
    {"immigrant", IdentityKind::kImmigrants},
};

const IdentityNames& NamesFor(IdentityKind kind) {
  for (const auto& n : kIdentityNames) {
    if (n.kind == kind) return n;
  }
  throw Error(ErrorCode::kInvalidArgument, "no names for Other identity");
}

constexpr FunctionalityInfo kFunctionalities[] = {
    {1, "derog_neg_emote_h", GoldLabel::kHateful},
    {2, "derog_neg_attrib_h", GoldLabel::kHateful},
    {3, "derog_dehum_h", GoldLabel::kHateful},
    {4, "derog_impl_h", GoldLabel::kHateful},
    {5, "threat_dir_h", GoldLabel::kHateful},
    {6, "threat_norm_h", GoldLabel::kHateful},
    {7, "slur_h", GoldLabel::kHateful},
    {8, "slur_homonym_nh", GoldLabel::kNonHateful},
    {9, "slur_reclaimed_nh", GoldLabel::kNonHateful},
    {10, "profanity_h", GoldLabel::kHateful},
    {11, "profanity_nh", GoldLabel::kNonHateful},
    {12, "ref_subs_clause_h", GoldLabel::kHateful},
    {13, "ref_subs_sent_h", GoldLabel::kHateful},
    {14, "negate_pos_h", GoldLabel::kHateful},
    {15, "negate_neg_nh", GoldLabel::kNonHateful},
    {16, "phrase_question_h", GoldLabel::kHateful},
    {17, "phrase_opinion_h", GoldLabel::kHateful},
    {18, "ident_neutral_nh", GoldLabel::kNonHateful},
    {19, "ident_pos_nh", GoldLabel::kNonHateful},
    {20, "counter_quote_nh", GoldLabel::kNonHateful},
    {21, "counter_ref_nh", GoldLabel::kNonHateful},
    {22, "target_obj_nh", GoldLabel::kNonHateful},
    {23, "target_indiv_nh", GoldLabel::kNonHateful},
    {24, "target_group_nh", GoldLabel::kNonHateful},
    {25, "spell_char_swap_h", GoldLabel::kHateful},
    {26, "spell_char_del_h", GoldLabel::kHateful},
    {27, "spell_space_del_h", GoldLabel::kHateful},
    {28, "spell_space_add_h", GoldLabel::kHateful},
    {29, "spell_leet_h", GoldLabel::kHateful},
};

}  // namespace

TargetIdentity TargetIdentity::Other(std::string tag) {
  TargetIdentity t;
  t.kind_ = IdentityKind::kOther;
  t.tag_ = std::move(tag);
  return t;
}

TargetIdentity TargetIdentity::Parse(std::string_view text) {
  const std::string trimmed(Trim(text));
  const std::string lower = ToLower(trimmed);
  if (lower.empty() || lower == "nan" || lower == "none" || lower == "null") {
    return None();
  }
  for (const auto& a : kAliases) {
    if (lower == a.text) return TargetIdentity(a.kind);
  }
  return Other(trimmed);
}

std::string TargetIdentity::SurfaceString() const {
  if (!is_named()) return tag_;
  return std::string(NamesFor(kind_).surface);
}

std::string TargetIdentity::Key() const {
  if (!is_named()) return tag_;
  return std::string(NamesFor(kind_).key);
}

std::string TargetIdentity::DisplayName() const {
  if (!is_named()) return tag_;
  return std::string(NamesFor(kind_).display);
}

std::optional<TargetIdentity> ParseIdentityKey(std::string_view key) {
  const std::string lower = ToLower(Trim(key));
  for (const auto& n : kIdentityNames) {
    if (lower == n.key) return TargetIdentity(n.kind);
  }
  TargetIdentity t = TargetIdentity::Parse(key);
  if (t.is_named()) return t;
  return std::nullopt;
}

std::string_view GoldLabelName(GoldLabel label) {
  return label == GoldLabel::kHateful ? "hateful" : "non-hateful";
}

std::optional<GoldLabel> ParseGoldLabel(std::string_view text) {
  const std::string lower = ToLower(Trim(text));
  if (lower == "hateful" || lower == "hate" || lower == "1" ||
      lower == "true") {
    return GoldLabel::kHateful;
  }
  if (lower == "non-hateful" || lower == "non_hateful" ||
      lower == "nonhateful" || lower == "non-hate" || lower == "not hateful" ||
      lower == "0" || lower == "false") {
    return GoldLabel::kNonHateful;
  }
  return std::nullopt;
}

std::optional<FunctionalityInfo> LookupFunctionality(std::string_view name) {
  const std::string lower = ToLower(Trim(name));
  if (lower.size() >= 2 && lower[0] == 'f' &&
      std::all_of(lower.begin() + 1, lower.end(),
                  [](char c) { return c >= '0' && c <= '9'; })) {
    const int n = std::stoi(lower.substr(1));
    for (const auto& f : kFunctionalities) {
      if (f.number == n) return f;
    }
    return std::nullopt;
  }
  for (const auto& f : kFunctionalities) {
    if (lower == f.code) return f;
  }
  return std::nullopt;
}

bool IsSlurFunctionality(const FunctionalityInfo& info) {
  return info.number >= 7 && info.number <= 9;
}

}  // namespace hsaudit
