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

#ifndef HSAUDIT_CSV_H_
#define HSAUDIT_CSV_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsaudit {

// One parsed record plus the 1-based line number it started on.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// RFC 4180 parser: comma separated, '"' quoting with "" escapes, CRLF or LF
// record terminators, embedded newlines inside quoted fields. A leading UTF-8
// BOM is skipped. Throws Error(kMalformedRow) on an unterminated quote.
std::vector<CsvRecord> ParseCsv(std::string_view text);

// Header-indexed view over a parsed file.
class CsvTable {
 public:
  explicit CsvTable(std::string_view text);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<CsvRecord>& rows() const { return rows_; }
  std::optional<std::size_t> ColumnIndex(std::string_view name) const;

 private:
  std::vector<std::string> header_;
  std::vector<CsvRecord> rows_;
};

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string CsvEscape(std::string_view field);
std::string CsvLine(const std::vector<std::string>& fields);  // with '\n'

}  // namespace hsaudit

#endif  // HSAUDIT_CSV_H_
