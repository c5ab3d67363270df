// Copyright 2026 The Scriptorium Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Minimal RFC 4180 CSV writer/reader used by every export. Numbers are
// formatted with fixed precision so exports are byte-stable.

#include <string>
#include <string_view>
#include <vector>

namespace scriptorium::csv {

using Row = std::vector<std::string>;

std::string escape(std::string_view field);
std::string format_row(const Row& row);        // includes trailing "\n"
std::string fixed(double value, int decimals);  // "-0.0000" is printed as "0.0000"

struct Table {
  std::vector<std::string> comments;  // leading '#' lines, without the '#'
  Row header;
  std::vector<Row> rows;
};

// Parses a whole document. Leading lines starting with '#' are collected as
// comments. Throws ParseError on an unterminated quoted field.
Table parse(std::string_view text);

}  // namespace scriptorium::csv
