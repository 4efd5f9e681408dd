// Copyright 2026 The graphmc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRAPHMC_TEXT_IO_H_
#define GRAPHMC_TEXT_IO_H_

#include <string>
#include <string_view>
#include <vector>

namespace graphmc {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

// Strict parse of a full token (surrounding blanks allowed). Accepts "inf",
// "-inf" and "nan". Returns false on any trailing garbage.
bool parse_double(std::string_view token, double& value);
bool parse_int(std::string_view token, long long& value);

// Splits on a single delimiter character, keeping empty fields.
std::vector<std::string_view> split(std::string_view line, char delim);

// Splits on runs of spaces/tabs, dropping empty fields.
std::vector<std::string_view> split_whitespace(std::string_view line);

std::string_view trim(std::string_view s);

}  // namespace graphmc

#endif  // GRAPHMC_TEXT_IO_H_
