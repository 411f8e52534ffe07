// Copyright 2026 The budgetlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BUDGETLAB_REPORT_CSV_H_
#define BUDGETLAB_REPORT_CSV_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace budgetlab::report {

std::string_view trim(std::string_view text);

// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

// Quotes a field only when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

double parse_double(std::string_view text, std::size_t line);
long long parse_int(std::string_view text, std::size_t line);

// 17 significant digits: parses back to exactly `value`.
std::string format_exact(double value);

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// A parsed CSV document. Lines starting with '#' and blank lines are skipped
// so fixtures can carry provenance comments above the header.
class CsvTable {
 public:
  static CsvTable Parse(std::istream& in);
  static CsvTable Load(const std::filesystem::path& path);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<CsvRow>& rows() const { return rows_; }

  // Throws ParseError unless the header matches `expected` exactly.
  void require_header(const std::vector<std::string>& expected) const;
  // Throws ParseError unless every name in `required` is present.
  void require_columns(const std::vector<std::string>& required) const;

  std::optional<std::size_t> column(std::string_view name) const;
  const std::string& at(const CsvRow& row, std::string_view name) const;

 private:
  std::vector<std::string> header_;
  std::size_t header_line_ = 0;
  std::vector<CsvRow> rows_;
};

// Writes `content` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace budgetlab::report

#endif  // BUDGETLAB_REPORT_CSV_H_
