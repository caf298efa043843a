// Copyright 2026 The Groupforge Authors
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

#ifndef GROUPFORGE_CSV_HPP
#define GROUPFORGE_CSV_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace groupforge {

/// Reads a delimiter-separated file into rows of cells. Trailing '\r' is
/// stripped (CRLF tolerance); empty lines are skipped; no quoting support.
/// Throws MissingFile if the file cannot be opened.
std::vector<std::vector<std::string>> read_delimited(
    const std::filesystem::path& path, char delimiter);

/// Strict double parse: the whole cell must be consumed. nullopt on failure.
std::optional<double> parse_double(const std::string& cell);

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);

/// Writes lines joined by '\n' with a trailing newline.
void write_text_file(const std::filesystem::path& path,
                     const std::vector<std::string>& lines);

}  // namespace groupforge

#endif  // GROUPFORGE_CSV_HPP
