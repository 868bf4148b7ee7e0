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

#include "lcc/text_io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace lcc::io {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view token, double& out) {
    token = trim(token);
    if (token.empty()) return false;
    if (token.front() == '+') token.remove_prefix(1);
    const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    return res.ec == std::errc{} && res.ptr == token.data() + token.size();
}

bool parse_int(std::string_view token, long long& out) {
    token = trim(token);
    if (token.empty()) return false;
    if (token.front() == '+') token.remove_prefix(1);
    const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    return res.ec == std::errc{} && res.ptr == token.data() + token.size();
}

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::string join_doubles(std::span<const double> values, char sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out.push_back(sep);
        out += format_double(values[i]);
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw DataError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw DataError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

KeyValueReader::KeyValueReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

void KeyValueReader::fail(const std::string& what) const { throw ParseError(source_, line_, what); }

bool KeyValueReader::at_end() {
    while (true) {
        const int c = in_.peek();
        if (c == std::char_traits<char>::eof()) return true;
        if (c == '\n' || c == '\r' || c == ' ' || c == '\t') {
            if (c == '\n') ++line_;
            in_.get();
            continue;
        }
        return false;
    }
}

std::vector<std::string> KeyValueReader::next_tokens() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        return {tokens.begin(), tokens.end()};
    }
    fail("unexpected end of input");
}

std::vector<std::string> KeyValueReader::expect(std::string_view key, std::size_t value_count) {
    auto tokens = next_tokens();
    if (tokens.front() != key) fail("expected '" + std::string(key) + "', found '" + tokens.front() + "'");
    if (tokens.size() != value_count + 1) {
        fail("'" + std::string(key) + "' expects " + std::to_string(value_count) + " value(s)");
    }
    tokens.erase(tokens.begin());
    return tokens;
}

double KeyValueReader::expect_double(std::string_view key) {
    const auto v = expect(key, 1);
    double out = 0.0;
    if (!parse_double(v[0], out)) fail("'" + std::string(key) + "' is not a number: " + v[0]);
    return out;
}

long long KeyValueReader::expect_int(std::string_view key) {
    const auto v = expect(key, 1);
    long long out = 0;
    if (!parse_int(v[0], out)) fail("'" + std::string(key) + "' is not an integer: " + v[0]);
    return out;
}

std::string KeyValueReader::expect_word(std::string_view key) { return expect(key, 1)[0]; }

Vector KeyValueReader::read_vector(std::size_t count) {
    const auto tokens = next_tokens();
    if (tokens.size() != count) {
        fail("expected " + std::to_string(count) + " values, found " + std::to_string(tokens.size()));
    }
    Vector v(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) {
        if (!parse_double(tokens[i], v[static_cast<Eigen::Index>(i)])) fail("not a number: " + tokens[i]);
    }
    return v;
}

}  // namespace lcc::io
