// Copyright 2026 The lcc Authors.
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

#pragma once

#include "lcc/common.hpp"

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lcc::io {

// Shortest text with 17 significant digits; parse_double() of it returns the same bits.
std::string format_double(double value);

// Strict full-token parse. Returns false on trailing garbage or empty input.
bool parse_double(std::string_view token, double& out);
bool parse_int(std::string_view token, long long& out);

std::string_view trim(std::string_view s);

// Splits on a single delimiter; fields are trimmed.
std::vector<std::string_view> split(std::string_view line, char delim);

// Splits on runs of spaces/tabs.
std::vector<std::string_view> split_ws(std::string_view line);

std::string join_doubles(std::span<const double> values, char sep = ' ');

// Writes to a sibling temp file then renames over the destination.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

// Line-oriented reader for the "key value ..." model formats.
class KeyValueReader {
  public:
    KeyValueReader(std::istream& in, std::string source);

    // Next non-empty line split on whitespace; throws ParseError at EOF.
    std::vector<std::string> next_tokens();

    // Next line must start with `key`; returns the remaining tokens.
    std::vector<std::string> expect(std::string_view key, std::size_t value_count);

    double expect_double(std::string_view key);
    long long expect_int(std::string_view key);
    std::string expect_word(std::string_view key);

    // Parses every token of a line as a double; the line must hold exactly `count` values.
    Vector read_vector(std::size_t count);

    bool at_end();
    std::size_t line() const noexcept { return line_; }
    const std::string& source() const noexcept { return source_; }

    [[noreturn]] void fail(const std::string& what) const;

  private:
    std::istream& in_;
    std::string source_;
    std::size_t line_ = 0;
};

}  // namespace lcc::io
