#pragma once

// Small string helpers shared by the file readers.

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace leveler::text {

bool is_valid_utf8(std::string_view s) noexcept;

/// Decodes UTF-8 into code points; throws leveler::Error on invalid input.
std::u32string decode_utf8(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

/// Splits on runs of ASCII whitespace, dropping empty pieces.
std::vector<std::string_view> split_ws(std::string_view s);

bool has_whitespace(std::string_view s) noexcept;

std::optional<std::uint64_t> parse_uint(std::string_view s) noexcept;
std::optional<double> parse_double(std::string_view s) noexcept;

/// Reads one line, stripping a trailing '\r'. Returns false at end of stream.
bool read_line(std::istream& in, std::string& line);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Fixed one-decimal rendering with half-up rounding (e.g. 30.95 -> "31.0").
std::string format_percent(double v);

}  // namespace leveler::text
