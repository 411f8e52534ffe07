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

#include "budgetlab/report/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <system_error>

#include <fmt/format.h>

#include "budgetlab/error.h"

namespace budgetlab::report {

std::string_view trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kSpace);
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(current));
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.emplace_back(trim(current));
  return fields;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

double parse_double(std::string_view text, std::size_t line) {
  text = trim(text);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("expected a number, got '" + std::string(text) + "'", line);
  }
  return value;
}

long long parse_int(std::string_view text, std::size_t line) {
  text = trim(text);
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("expected an integer, got '" + std::string(text) + "'", line);
  }
  return value;
}

std::string format_exact(double value) {
  return fmt::format("{:.17g}", value);
}

CsvTable CsvTable::Parse(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      table.header_ = std::move(fields);
      table.header_line_ = line_no;
      have_header = true;
      continue;
    }
    if (fields.size() != table.header_.size()) {
      throw ParseError("expected " + std::to_string(table.header_.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    table.rows_.push_back(CsvRow{line_no, std::move(fields)});
  }
  if (!have_header) throw ParseError("missing CSV header", line_no);
  return table;
}

CsvTable CsvTable::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return Parse(in);
}

void CsvTable::require_header(const std::vector<std::string>& expected) const {
  if (header_ != expected) {
    std::string want;
    for (const auto& name : expected) want += (want.empty() ? "" : ",") + name;
    throw ParseError("expected header '" + want + "'", header_line_);
  }
}

void CsvTable::require_columns(const std::vector<std::string>& required) const {
  for (const auto& name : required) {
    if (!column(name)) throw ParseError("missing column '" + name + "'", header_line_);
  }
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

const std::string& CsvTable::at(const CsvRow& row, std::string_view name) const {
  const auto index = column(name);
  if (!index) throw ParseError("missing column '" + std::string(name) + "'", row.line);
  return row.fields[*index];
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace budgetlab::report
