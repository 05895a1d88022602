// Copyright 2026 The qstack Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Matrix file formats.
 *
 * CSV: one row per line, comma-separated decimal floats, no header.
 * Binary: uint32 rows, uint32 cols (little-endian), then rows*cols
 * little-endian IEEE-754 doubles in row-major order.
 */
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qstack/error.hpp"
#include "qstack/vectorspace.hpp"

namespace qstack::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view field, std::size_t line) {
    field = trim(field);
    double value = 0.0;
    const auto *end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end || field.empty()) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad number '" +
                                               std::string(field) + "'");
    }
    return value;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

template <class T> void put_le(std::ostream &os, T value) {
    static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big);
    std::array<char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    os.write(bytes.data(), bytes.size());
}

template <class T> T get_le(const unsigned char *p) {
    std::array<unsigned char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    T value{};
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

} // namespace detail

inline RealMatrix parse_matrix_csv(std::string_view text) {
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const auto line = detail::trim(text.substr(start, end - start));
        ++line_no;
        start = end + 1;
        if (line.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        const auto fields = detail::split(line, ',');
        if (rows == 0) {
            cols = fields.size();
        } else if (fields.size() != cols) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + " has " +
                                                   std::to_string(fields.size()) +
                                                   " fields, expected " + std::to_string(cols));
        }
        for (auto f : fields) {
            data.push_back(detail::parse_double(f, line_no));
        }
        ++rows;
        if (end == text.size()) {
            break;
        }
    }
    if (rows == 0) {
        throw Error(ErrorKind::ParseError, "empty matrix");
    }
    return RealMatrix(rows, cols, std::move(data));
}

inline std::string read_text(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<unsigned char> read_bytes(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline RealMatrix read_matrix_csv(const std::filesystem::path &path) {
    return parse_matrix_csv(read_text(path));
}

/// Shortest round-trip formatting.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

inline void write_matrix_csv(const std::filesystem::path &path, const RealMatrix &m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot write " + path.string());
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c != 0) {
                out << ',';
            }
            out << format_double(m(r, c));
        }
        out << '\n';
    }
}

inline RealMatrix decode_matrix_binary(std::span<const unsigned char> bytes) {
    if (bytes.size() < 8) {
        throw Error(ErrorKind::TruncatedFile, "binary matrix header needs 8 bytes");
    }
    const auto rows = detail::get_le<std::uint32_t>(bytes.data());
    const auto cols = detail::get_le<std::uint32_t>(bytes.data() + 4);
    const std::size_t count = static_cast<std::size_t>(rows) * cols;
    if (bytes.size() < 8 + count * 8) {
        throw Error(ErrorKind::TruncatedFile, "binary matrix payload shorter than " +
                                                  std::to_string(rows) + "x" +
                                                  std::to_string(cols) + " doubles");
    }
    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i) {
        data[i] = detail::get_le<double>(bytes.data() + 8 + i * 8);
    }
    return RealMatrix(rows, cols, std::move(data));
}

inline RealMatrix read_matrix_binary(const std::filesystem::path &path) {
    const auto bytes = read_bytes(path);
    return decode_matrix_binary(bytes);
}

inline void write_matrix_binary(const std::filesystem::path &path, const RealMatrix &m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot write " + path.string());
    }
    detail::put_le(out, static_cast<std::uint32_t>(m.rows()));
    detail::put_le(out, static_cast<std::uint32_t>(m.cols()));
    for (double v : m.values()) {
        detail::put_le(out, v);
    }
}

/// Dispatch on extension: ".bin" is binary, anything else CSV.
inline RealMatrix read_matrix(const std::filesystem::path &path) {
    if (path.extension() == ".bin") {
        return read_matrix_binary(path);
    }
    return read_matrix_csv(path);
}

} // namespace qstack::io
