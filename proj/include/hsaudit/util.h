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

#ifndef HSAUDIT_UTIL_H_
#define HSAUDIT_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace hsaudit {

std::string_view Trim(std::string_view s);
std::string ToLower(std::string_view s);
std::vector<std::string> SplitLines(std::string_view s);
bool StartsWith(std::string_view s, std::string_view prefix);

// Fixed-precision rendering used by every report so that output bytes do not
// depend on locale or stream state. Negative zero prints as zero.
std::string FormatFixed(double value, int precision);
// Shortest text that parses back to the same double.
std::string FormatShortest(double value);
// Strict full-string parse; nullopt on trailing garbage or overflow.
std::optional<double> ParseDouble(std::string_view text);

std::string Sha256Hex(std::string_view data);

// Maps anything outside [A-Za-z0-9.-] to '_' for use in file names.
std::string FileSlug(std::string_view s);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// Portable random draws. std::mt19937_64 is fully specified by the standard
// but the <random> distributions are not, so these are spelled out.
double UniformDouble(std::mt19937_64& rng);            // [0, 1)
std::size_t UniformIndex(std::mt19937_64& rng, std::size_t n);  // [0, n)
double NormalDouble(std::mt19937_64& rng);              // N(0, 1)

}  // namespace hsaudit

#endif  // HSAUDIT_UTIL_H_
