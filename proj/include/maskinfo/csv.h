/* Copyright 2026 The maskinfo Authors. All Rights Reserved.

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

#ifndef MASKINFO_CSV_H_
#define MASKINFO_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace maskinfo {

using CsvRow = std::vector<std::string>;

// RFC 4180 reader: quoted fields may hold commas, newlines and doubled
// quotes. Accepts LF or CRLF line ends; blank lines are dropped. Throws
// IOFailure on an unterminated quote.
std::vector<CsvRow> ParseCsv(std::string_view text);

// Quotes a field only when it needs it.
std::string CsvEscape(std::string_view field);
std::string CsvLine(const CsvRow& row);

// Whole file as bytes; throws IOFailure.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view bytes);

}  // namespace maskinfo

#endif  // MASKINFO_CSV_H_
