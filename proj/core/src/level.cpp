#include "leveler/level.hpp"

#include "leveler/text.hpp"

namespace leveler {

std::optional<Level> parse_level(std::string_view text) noexcept {
  auto v = text::parse_uint(text);
  if (!v || *v > 5) return std::nullopt;
  return clamp_level(static_cast<int>(*v));
}

std::string to_string(Level l) { return std::to_string(to_int(l)); }

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

}  // namespace leveler
