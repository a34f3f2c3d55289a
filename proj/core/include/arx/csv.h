/*
 * Copyright 2026 The Arx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ARX_CSV_H_
#define ARX_CSV_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arx {

// Minimal RFC 4180 reader: comma separator, double-quote escaping, LF or
// CRLF line endings. Blank lines are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv_file(const std::filesystem::path& path);

std::string csv_escape(std::string_view field);

// Locale-independent number formatting and parsing. format_number emits the
// shortest representation that round-trips exactly.
std::string format_number(double value);
std::optional<double> parse_number(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it over the destination.
void write_text_file_atomic(const std::filesystem::path& path,
                            std::string_view contents);

}  // namespace arx

#endif  // ARX_CSV_H_
