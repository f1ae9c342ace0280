#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace leveler {

/// Readability level of a word or fragment. Only 3 (easy) < 4 < 5 (hard)
/// exist; source levels 1 and 2 are folded into 3 by clamp_level().
enum class Level : std::uint8_t { L3 = 3, L4 = 4, L5 = 5 };

inline constexpr std::array<Level, 3> kAllLevels{Level::L3, Level::L4, Level::L5};
inline constexpr std::size_t kNumLevels = kAllLevels.size();

constexpr int to_int(Level l) noexcept { return static_cast<int>(l); }

/// Dense index 0..2 for array-backed per-level tables.
constexpr std::size_t level_index(Level l) noexcept {
  return static_cast<std::size_t>(to_int(l) - 3);
}

constexpr Level level_from_index(std::size_t i) noexcept { return kAllLevels[i]; }

constexpr std::strong_ordering operator<=>(Level a, Level b) noexcept {
  return to_int(a) <=> to_int(b);
}

/// Maps a raw 1..5 value onto {3,4,5}; nullopt outside 1..5.
constexpr std::optional<Level> clamp_level(int raw) noexcept {
  if (raw < 1 || raw > 5) return std::nullopt;
  if (raw <= 3) return Level::L3;
  return raw == 4 ? Level::L4 : Level::L5;
}

/// Accepts exactly 3, 4 or 5.
constexpr std::optional<Level> exact_level(int raw) noexcept {
  if (raw < 3 || raw > 5) return std::nullopt;
  return static_cast<Level>(raw);
}

/// Parses a decimal level 1..5 (clamped). nullopt on anything else.
std::optional<Level> parse_level(std::string_view text) noexcept;

std::string to_string(Level l);

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input; carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace leveler
