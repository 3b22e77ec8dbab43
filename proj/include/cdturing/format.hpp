#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cdturing {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// `v` rounded to `digits` significant digits.
std::string format_significant(double v, int digits);

/// Whole-token parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);

}  // namespace cdturing
